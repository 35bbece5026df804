#pragma once

#include <Eigen/Dense>

namespace floquet_hop {

/// Overlap <i'|i> between eigenstate i of the undisplaced oscillator and
/// eigenstate i' of the oscillator displaced by sqrt(2) lambda (in units of
/// the oscillator length, towards negative x):
///   F = sqrt(p!/Q!) lambda^{Q-p} exp(-lambda^2/2) L_p^{Q-p}(lambda^2) [sgn(i'-i)]^{i-i'}
/// with p = min(i, i'), Q = max(i, i'). Equivalently
///   F = integral dx phi_{i'}(x + sqrt(2) lambda) phi_i(x).
/// Throws std::domain_error for Q > 170 or negative arguments.
double fc_factor(int i, int i_prime, double lambda);

struct FranckCondonTable {
  double lambda = 0.0;
  int N = 0;
  Eigen::MatrixXd F;  // F(i, i') = <i'|i>

  double operator()(int i, int i_prime) const { return F(i, i_prime); }
};

FranckCondonTable fc_table(int N, double lambda);

}  // namespace floquet_hop
