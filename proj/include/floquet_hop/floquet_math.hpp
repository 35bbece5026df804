#pragma once

#include <complex>
#include <span>
#include <vector>

#include "floquet_hop/model.hpp"

namespace floquet_hop {

using cplx = std::complex<double>;

/// Truncated table of J_n(z) for -n_max <= n <= n_max.
struct FloquetWeights {
  double z = 0.0;
  int n_max = 0;
  std::vector<double> J;  // J[n + n_max]

  double operator()(int n) const { return J[static_cast<std::size_t>(n + n_max)]; }
  int size() const { return 2 * n_max + 1; }
  /// Sum of J_n(z)^2 over the retained orders.
  double norm() const;
};

/// Bessel weights with n_max the smallest order whose discarded tail mass
/// 1 - sum J_n^2 is below tol. Values come from Miller's backward recurrence
/// normalized by J_0 + 2 sum J_2k = 1. Throws std::runtime_error when the tail
/// does not fall below tol by order max(50, ceil(z) + 60).
FloquetWeights bessel_weights(double z, double tol = 1e-10);

/// Weights for the given drive: bessel_weights(drive.z(), tol).
FloquetWeights bessel_weights(const DriveParams& drive, double tol = 1e-10);

/// Accumulated drive phase (A/Omega)(1 - cos Omega t).
double drive_phase(double t, const DriveParams& drive);

/// Fermi function 1/(1 + exp(x/kT)), overflow safe.
double fermi(double x, double kT);

/// Time-dependent Floquet Fermi function
///   sum_{n,m} i^n (-i)^m J_n J_m exp(i(n-m) Omega t) f(x - m Omega).
cplx fermi_floquet_t(double x, double t, const DriveParams& drive,
                     const FloquetWeights& weights, double kT);

/// Cycle-averaged Floquet Fermi function sum_n J_n^2 f(x - n Omega).
double fermi_floquet_avg(double x, const DriveParams& drive,
                         const FloquetWeights& weights, double kT);

/// Per-time coefficients c_m(t) such that f~(x, t) = sum_m c_m(t) f(x - m Omega).
/// The n-sum of the double series factors out as sum_n i^n J_n e^{i n Omega t}.
std::vector<cplx> replica_coefficients(double t, const DriveParams& drive,
                                       const FloquetWeights& weights);

/// Fast evaluation of the replica Fermi values f(x - m Omega), |m| <= n_max,
/// with one exponential per call. Used in the inner loops of both engines.
class ReplicaFermi {
 public:
  ReplicaFermi(const DriveParams& drive, const FloquetWeights& weights, double kT);

  int n_max() const { return n_max_; }
  int size() const { return 2 * n_max_ + 1; }

  /// out[m + n_max] = f(x - m Omega). out.size() must equal size().
  void evaluate(double x, std::span<double> out) const;

  /// sum_m J_m^2 out[m].
  double average(std::span<const double> values) const;

  /// sum_m c_m out[m] for coefficients from replica_coefficients().
  static cplx instantaneous(std::span<const double> values, std::span<const cplx> coeffs);

 private:
  int n_max_;
  double kT_;
  double ratio_;      // exp(-Omega/kT)
  double ratio_inv_;  // exp(+Omega/kT)
  std::vector<double> weights_sq_;
};

}  // namespace floquet_hop
