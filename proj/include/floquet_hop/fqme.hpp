#pragma once

// Floquet quantum master equation for the two-block reduced density matrix.
//
// The unoccupied block rho0 lives in the eigenbasis of H0, the occupied block
// rho1 in the displaced eigenbasis of H1. Every Fermi factor in the generator
// is evaluated at eps1(i') - eps0(k) = omega (i' - k) + Ed_bar, so a single
// vector of 2N - 1 values indexed by i' - k carries the whole drive
// dependence. The generator is implemented literally: the same complex f~
// appears on ket and bra sides, and any resulting anti-Hermitian part is
// reported rather than removed.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "floquet_hop/floquet_math.hpp"
#include "floquet_hop/franck_condon.hpp"
#include "floquet_hop/model.hpp"
#include "floquet_hop/types.hpp"

namespace floquet_hop {

enum class MatrixMode { FQME, FaQME };

struct DensityMatrixPair {
  Eigen::MatrixXcd rho0;
  Eigen::MatrixXcd rho1;
  double t = 0.0;

  cplx trace() const { return rho0.trace() + rho1.trace(); }
  /// max |rho - rho^dagger| over both blocks.
  double hermiticity_defect() const;
  bool finite() const;
};

/// Drive-independent part of the generator.
struct GeneratorTensors {
  int N = 0;
  double Gamma = 0.0;
  Eigen::VectorXd eps0;             // omega (i + 1/2)
  Eigen::VectorXd eps1;             // omega (i' + 1/2) + Ed_bar
  Eigen::MatrixXd F;                // F(i, i')
  Eigen::MatrixXcd Fc;              // F as complex
  Eigen::MatrixXcd Fct;             // F^T as complex
  std::vector<double> fermi_args;   // eps1(i') - eps0(k) at index i' - k + N - 1

  int arg_index(int i_prime, int k) const { return i_prime - k + N - 1; }
};

GeneratorTensors build_generators(const ModelParams& params, const FranckCondonTable& fc);

/// Smallest basis for which exp(-eps0(N)/kT) / Z < 1e-10 at the given temperature.
int thermal_basis_size(double omega, double kT, double rel_tol = 1e-10);

/// Boltzmann rho0 at kT_nuc0 over eps0, trace one; rho1 = 0.
/// Throws std::invalid_argument when the basis truncates the distribution.
DensityMatrixPair initial_state(const ModelParams& params, int N);

struct MatrixObservables {
  double population = 0.0;  // Re Tr rho1
  double kinetic = 0.0;     // Re Tr[(rho0 + rho1) p^2/2m]
  double population_imag = 0.0;
};

/// <i|p^2/2m|j> in the oscillator eigenbasis (same in the displaced basis).
Eigen::MatrixXd kinetic_matrix(int N, double omega);

MatrixObservables observables(const DensityMatrixPair& state, const Eigen::MatrixXd& kinetic);

class FqmeEngine {
 public:
  FqmeEngine(const ModelParams& params, const DriveParams& drive, MatrixMode mode, int N,
             double weights_tol = 1e-10);

  const GeneratorTensors& generators() const { return gen_; }
  MatrixMode mode() const { return mode_; }

  /// Fermi factors f~(omega d + Ed_bar, t) for d = -(N-1)..N-1.
  Eigen::VectorXcd fermi_factors(double t) const;

  /// Time derivative of both blocks at time t.
  void derivative(const DensityMatrixPair& state, double t, DensityMatrixPair& out) const;

  /// One classical RK4 step; Fermi factors at t, t + dt/2, t + dt.
  /// Throws RuntimeAbort on non-finite entries.
  void step(DensityMatrixPair& state, double dt) const;

  DensityMatrixPair initial_state() const;
  MatrixObservables observables(const DensityMatrixPair& state) const;

 private:
  void assemble(const Eigen::VectorXcd& fermi, Eigen::MatrixXcd& a, Eigen::MatrixXcd& y,
                Eigen::MatrixXcd& m0, Eigen::MatrixXcd& m1) const;

  ModelParams params_;
  DriveParams drive_;
  MatrixMode mode_;
  FloquetWeights weights_;
  GeneratorTensors gen_;
  Eigen::MatrixXd kinetic_;
  Eigen::MatrixXd replica_values_;  // f(arg_d - m Omega), rows d, cols m + n_max

  // Static generator pieces (FaQME, or FQME without drive).
  bool static_generator_ = false;
  Eigen::MatrixXcd a_, y_, m0_, m1_;

  // Scratch for step(); engines are not shared between threads.
  mutable DensityMatrixPair k1_, k2_, k3_, k4_, tmp_;
  mutable Eigen::MatrixXcd wa_, wy_, wm0_, wm1_, w1_, w2_;
};

struct MatrixRunResult {
  TimeSeries series;
  std::vector<double> population_imag;
  int basis_N = 0;
};

/// Propagates from initial_state() to t_final, recording every output_stride steps.
MatrixRunResult run_matrix(const RunSettings& settings);

}  // namespace floquet_hop
