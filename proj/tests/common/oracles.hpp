#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls into the library's numerical kernels.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

/// J_n(z) from the ascending power series. Adequate for z <= 10.
inline double bessel_series(int n, double z) {
  const int an = std::abs(n);
  double term = std::pow(0.5 * z, an) / std::tgamma(an + 1.0);
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -(0.25 * z * z) / (k * static_cast<double>(k + an));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > 5) break;
  }
  return (n < 0 && an % 2) ? -sum : sum;
}

/// J_n(z) via the standard library special function.
inline double bessel_std(int n, double z) {
  const double v = std::cyl_bessel_j(static_cast<double>(std::abs(n)), z);
  return (n < 0 && std::abs(n) % 2) ? -v : v;
}

inline double fermi(double x, double kT) { return 0.5 * (1.0 - std::tanh(0.5 * x / kT)); }

/// Direct double sum over n, m in [-n_max, n_max].
inline cplx floquet_fermi_double_sum(double x, double t, double A, double Omega, double kT,
                                     int n_max) {
  if (A == 0.0) return fermi(x, kT);
  const double z = A / Omega;
  const cplx i{0.0, 1.0};
  cplx acc{0.0, 0.0};
  for (int n = -n_max; n <= n_max; ++n) {
    for (int m = -n_max; m <= n_max; ++m) {
      acc += std::pow(i, n) * std::pow(-i, m) * bessel_std(n, z) * bessel_std(m, z) *
             std::exp(i * static_cast<double>(n - m) * Omega * t) * fermi(x - m * Omega, kT);
    }
  }
  return acc;
}

inline double floquet_fermi_average_sum(double x, double A, double Omega, double kT, int n_max) {
  if (A == 0.0) return fermi(x, kT);
  double acc = 0.0;
  for (int n = -n_max; n <= n_max; ++n) {
    const double j = bessel_std(n, A / Omega);
    acc += j * j * fermi(x - n * Omega, kT);
  }
  return acc;
}

/// Normalized Hermite functions phi_0..phi_n at xi.
inline std::vector<double> hermite_functions(int n, double xi) {
  std::vector<double> phi(static_cast<std::size_t>(n) + 1);
  phi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  if (n >= 1) phi[1] = std::sqrt(2.0) * xi * phi[0];
  for (int k = 1; k < n; ++k) {
    phi[k + 1] = std::sqrt(2.0 / (k + 1)) * xi * phi[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * phi[k - 1];
  }
  return phi;
}

/// integral phi_{i'}(xi + sqrt(2) lambda) phi_i(xi) d xi by the trapezoid rule,
/// which converges geometrically for these integrands.
inline double fc_quadrature(int i, int i_prime, double lambda) {
  const double shift = std::sqrt(2.0) * lambda;
  const double h = 0.005;
  const double lim = 30.0;
  double acc = 0.0;
  for (double xi = -lim; xi <= lim; xi += h) {
    const double a = hermite_functions(i_prime, xi + shift)[i_prime];
    const double b = hermite_functions(i, xi)[i];
    acc += a * b;
  }
  return acc * h;
}

/// Element-by-element right-hand side of the two-block master equation.
/// phi(ip, k) is the Fermi factor for the transition k (unoccupied) -> ip (occupied);
/// F(i, ip) the Franck-Condon overlap.
template <class Phi>
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> qme_rhs(const Eigen::MatrixXcd& r0,
                                                      const Eigen::MatrixXcd& r1,
                                                      const Eigen::MatrixXd& F, double omega,
                                                      double Ed_bar, double Gamma, Phi phi) {
  const int n = static_cast<int>(F.rows());
  const cplx I{0.0, 1.0};
  auto A = [&](int ip, int k) { return phi(ip, k) * F(k, ip); };
  auto Y = [&](int ip, int k) { return (1.0 - phi(ip, k)) * F(k, ip); };
  Eigen::MatrixXcd M0 = Eigen::MatrixXcd::Zero(n, n), M1 = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int a = 0; a < n; ++a) {
        M0(i, j) += F(i, a) * A(a, j);
        M1(i, j) += F(a, i) * Y(j, a);
      }
    }
  }
  Eigen::MatrixXcd d0(n, n), d1(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx v0 = -I * (omega * (i - j)) * r0(i, j);
      cplx v1 = -I * (omega * (i - j)) * r1(i, j);
      for (int k = 0; k < n; ++k) {
        v0 -= 0.5 * Gamma * (M0(i, k) * r0(k, j) + r0(i, k) * M0(j, k));
        v1 -= 0.5 * Gamma * (M1(i, k) * r1(k, j) + r1(i, k) * M1(j, k));
      }
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          v0 += 0.5 * Gamma * (F(i, a) * r1(a, b) * Y(b, j) + Y(a, i) * r1(a, b) * F(j, b));
          v1 += 0.5 * Gamma * (F(a, i) * r0(a, b) * A(j, b) + A(i, a) * r0(a, b) * F(b, j));
        }
      }
      d0(i, j) = v0;
      d1(i, j) = v1;
    }
  }
  (void)Ed_bar;  // the level offset cancels in the commutator
  return {d0, d1};
}

/// P1(t) of a frozen two-level density with P1(0) = 0, rates
/// up = Gamma f(t), down = Gamma (1 - f(t)), f(t) = sum_k c_k exp(i k Omega t):
///   P1(t) = Gamma sum_k c_k (exp(i k Omega t) - exp(-Gamma t)) / (Gamma + i k Omega).
inline cplx frozen_density(double x, double t, double A, double Omega, double kT, double Gamma,
                           int n_max) {
  const cplx i{0.0, 1.0};
  if (A == 0.0) return fermi(x, kT) * (1.0 - std::exp(-Gamma * t));
  const double z = A / Omega;
  cplx acc{0.0, 0.0};
  for (int n = -n_max; n <= n_max; ++n) {
    for (int m = -n_max; m <= n_max; ++m) {
      const int k = n - m;
      const cplx c = std::pow(i, n) * std::pow(-i, m) * bessel_std(n, z) * bessel_std(m, z) *
                     fermi(x - m * Omega, kT);
      acc += c * (std::exp(i * (k * Omega * t)) - std::exp(-Gamma * t)) / (Gamma + i * (k * Omega));
    }
  }
  return Gamma * acc;
}

}  // namespace oracle
