#include "floquet_hop/franck_condon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace floquet_hop {

namespace {

// Generalized Laguerre L_n^alpha(x) by forward recurrence.
double laguerre(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double fc_factor(int i, int i_prime, double lambda) {
  if (i < 0 || i_prime < 0) throw std::domain_error("fc_factor: negative quantum number");
  if (!(lambda >= 0.0)) throw std::domain_error("fc_factor: lambda must be non-negative");
  const int p = std::min(i, i_prime);
  const int Q = std::max(i, i_prime);
  if (Q > 170) throw std::domain_error("fc_factor: quantum number above 170 loses precision");
  if (lambda == 0.0) return i == i_prime ? 1.0 : 0.0;

  const double lam2 = lambda * lambda;
  const double log_prefactor = 0.5 * (std::lgamma(p + 1.0) - std::lgamma(Q + 1.0)) +
                               (Q - p) * std::log(lambda) - 0.5 * lam2;
  double value = std::exp(log_prefactor) * laguerre(p, Q - p, lam2);
  if (i_prime < i && (i - i_prime) % 2 == 1) value = -value;
  return value;
}

FranckCondonTable fc_table(int N, double lambda) {
  if (N < 1) throw std::domain_error("fc_table: N must be >= 1");
  FranckCondonTable table;
  table.lambda = lambda;
  table.N = N;
  table.F.resize(N, N);
  for (int i = 0; i < N; ++i)
    for (int ip = 0; ip < N; ++ip) table.F(i, ip) = fc_factor(i, ip, lambda);
  return table;
}

}  // namespace floquet_hop
