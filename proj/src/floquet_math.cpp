#include "floquet_hop/floquet_math.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace floquet_hop {

namespace {

constexpr double kExpClamp = 700.0;

// i^k for any integer k.
cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

double FloquetWeights::norm() const {
  double s = 0.0;
  for (double j : J) s += j * j;
  return s;
}

FloquetWeights bessel_weights(double z, double tol) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("bessel_weights: z must be >= 0");
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("bessel_weights: tol must lie in (0, 1)");

  FloquetWeights w;
  w.z = z;
  if (z == 0.0) {
    w.n_max = 0;
    w.J = {1.0};
    return w;
  }

  const int cap = std::max(50, static_cast<int>(std::ceil(z)) + 60);
  int start = cap + 40;
  if (start % 2) ++start;

  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  if (z < 1e-4) {
    // Leading series terms; the recurrence would overflow per step here.
    const double h = 0.5 * z;
    j[0] = 1.0 - h * h;
    j[1] = h * (1.0 - 0.5 * h * h);
    j[2] = 0.5 * h * h;
    j[3] = h * h * h / 6.0;
  } else {
    // Miller recurrence J_{k-1} = (2k/z) J_k - J_{k+1}, seeded far above the
    // orders of interest; rescaled on the fly to stay in range.
    j[start] = 1e-300;
    for (int k = start; k >= 1; --k) {
      j[k - 1] = (2.0 * k / z) * j[k] - j[k + 1];
      if (std::abs(j[k - 1]) > 1e250) {
        for (int m = k - 1; m <= start; ++m) j[m] *= 1e-250;
      }
    }
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
    for (double& v : j) v /= norm;
  }

  // tail[n] = 2 sum_{k>n} J_k^2, accumulated from the top for accuracy.
  std::vector<double> tail(static_cast<std::size_t>(start) + 1, 0.0);
  for (int k = start - 1; k >= 0; --k) tail[k] = tail[k + 1] + 2.0 * j[k + 1] * j[k + 1];

  int n_max = -1;
  for (int n = 0; n <= cap; ++n) {
    if (tail[n] < tol) {
      n_max = n;
      break;
    }
  }
  if (n_max < 0) {
    throw std::runtime_error(fmt::format(
        "bessel_weights: tail mass above {} at order {} for z = {}", tol, cap, z));
  }

  w.n_max = n_max;
  w.J.resize(static_cast<std::size_t>(2 * n_max + 1));
  for (int n = -n_max; n <= n_max; ++n) {
    const double v = j[std::abs(n)];
    w.J[n + n_max] = (n < 0 && (-n) % 2 == 1) ? -v : v;
  }
  return w;
}

FloquetWeights bessel_weights(const DriveParams& drive, double tol) {
  return bessel_weights(drive.z(), tol);
}

double drive_phase(double t, const DriveParams& drive) {
  if (!drive.driven()) return 0.0;
  return drive.A / drive.Omega * (1.0 - std::cos(drive.Omega * t));
}

double fermi(double x, double kT) {
  const double beta_x = std::clamp(x / kT, -kExpClamp, kExpClamp);
  if (beta_x > 0.0) {
    const double e = std::exp(-beta_x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(beta_x));
}

std::vector<cplx> replica_coefficients(double t, const DriveParams& drive,
                                       const FloquetWeights& weights) {
  const int n_max = weights.n_max;
  const double theta = drive.Omega * t;
  cplx outer{0.0, 0.0};
  for (int n = -n_max; n <= n_max; ++n) {
    outer += ipow(n) * weights(n) * std::polar(1.0, n * theta);
  }
  std::vector<cplx> c(static_cast<std::size_t>(2 * n_max + 1));
  for (int m = -n_max; m <= n_max; ++m) {
    c[m + n_max] = outer * ipow(-m) * weights(m) * std::polar(1.0, -m * theta);
  }
  return c;
}

cplx fermi_floquet_t(double x, double t, const DriveParams& drive,
                     const FloquetWeights& weights, double kT) {
  if (weights.n_max == 0) return {fermi(x, kT), 0.0};
  const auto c = replica_coefficients(t, drive, weights);
  cplx acc{0.0, 0.0};
  for (int m = -weights.n_max; m <= weights.n_max; ++m) {
    acc += c[m + weights.n_max] * fermi(x - m * drive.Omega, kT);
  }
  return acc;
}

double fermi_floquet_avg(double x, const DriveParams& drive,
                         const FloquetWeights& weights, double kT) {
  double acc = 0.0;
  for (int n = -weights.n_max; n <= weights.n_max; ++n) {
    const double jn = weights(n);
    acc += jn * jn * fermi(x - n * drive.Omega, kT);
  }
  return acc;
}

ReplicaFermi::ReplicaFermi(const DriveParams& drive, const FloquetWeights& weights, double kT)
    : n_max_(weights.n_max), kT_(kT) {
  const double shift = n_max_ > 0 ? drive.Omega / kT : 0.0;
  ratio_ = std::exp(-shift);
  ratio_inv_ = std::exp(shift);
  weights_sq_.resize(weights.J.size());
  for (std::size_t k = 0; k < weights.J.size(); ++k) weights_sq_[k] = weights.J[k] * weights.J[k];
}

void ReplicaFermi::evaluate(double x, std::span<double> out) const {
  // e_m = exp((x - m Omega)/kT); the running products saturate at 0 or inf,
  // which map to f = 1 and f = 0 respectively.
  const double e0 = std::exp(std::clamp(x / kT_, -kExpClamp, kExpClamp));
  out[n_max_] = 1.0 / (1.0 + e0);
  double up = e0;
  double down = e0;
  for (int m = 1; m <= n_max_; ++m) {
    up *= ratio_;
    down *= ratio_inv_;
    out[n_max_ + m] = 1.0 / (1.0 + up);
    out[n_max_ - m] = 1.0 / (1.0 + down);
  }
}

double ReplicaFermi::average(std::span<const double> values) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) acc += weights_sq_[k] * values[k];
  return acc;
}

cplx ReplicaFermi::instantaneous(std::span<const double> values, std::span<const cplx> coeffs) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    re += coeffs[k].real() * values[k];
    im += coeffs[k].imag() * values[k];
  }
  return {re, im};
}

}  // namespace floquet_hop
