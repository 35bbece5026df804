#pragma once

// Surface-hopping solution of the Floquet classical master equation.
//
// Each trajectory carries one classical phase-space point on an active
// surface. Hops are drawn once per time step with probability rate * dt:
//   FSH           rates from the real positive part of the instantaneous
//                 complex Floquet rates;
//   FaSH          rates from the cycle-averaged Floquet Fermi function;
//   FaSH-density  hops as FaSH, plus a per-trajectory electronic density
//                 (P0, P1) driven by the instantaneous complex rates.
// No momentum adjustment is applied on a hop.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "floquet_hop/floquet_math.hpp"
#include "floquet_hop/model.hpp"
#include "floquet_hop/types.hpp"

namespace floquet_hop {

enum class HopMethod { FSH, FaSH, FaSHDensity };

HopMethod hop_method(Method m);

/// Which Floquet Fermi function a rate evaluation uses.
enum class RateKind { Instantaneous, CycleAveraged };

struct TrajectoryState {
  double x = 0.0;
  double p = 0.0;
  Surface surface = Surface::Unoccupied;
  cplx P0{1.0, 0.0};
  cplx P1{0.0, 0.0};
  std::uint64_t stream = 0;  // trajectory index within the ensemble
};

/// Per-trajectory random stream keyed by (master seed, trajectory index).
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t master_seed, std::uint64_t index);

  /// Uniform deviate in [0, 1) with 53 random bits.
  double uniform();
  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Boltzmann sample in the unoccupied well at kT_nuc0; P0 = 1, P1 = 0.
TrajectoryState sample_one(TrajectoryRng& rng, const ModelParams& params, std::uint64_t index);

/// n_traj independent samples; trajectory k uses TrajectoryRng(seed, k).
std::vector<TrajectoryState> sample_initial(int n_traj, const ModelParams& params,
                                            std::uint64_t master_seed);

/// Velocity-Verlet step on the active surface.
void verlet_step(TrajectoryState& state, const ModelParams& params, double dt);

struct HopRates {
  cplx up;    // gamma 0 -> 1 = (Gamma/hbar) f~(dV)
  cplx down;  // gamma 1 -> 0 = (Gamma/hbar) (1 - f~(dV))
};

/// Rates at position x and time t. Reference (unoptimized) evaluation.
HopRates hop_rates(double x, double t, RateKind kind, const ModelParams& params,
                   const DriveParams& drive, const FloquetWeights& weights);

/// Hop test: flips the surface when xi < max(Re gamma_{s -> other}, 0) dt.
/// Returns true on a hop.
bool attempt_hop(TrajectoryState& state, const HopRates& rates, double dt, double xi);

/// One RK4 step of dP0 = -up P0 + down P1, dP1 = up P0 - down P1 given the
/// rates at the start, midpoint and end of the step.
void propagate_density(TrajectoryState& state, const HopRates& begin, const HopRates& mid,
                       const HopRates& end, double dt);

/// Convenience form evaluating the instantaneous rates along a straight
/// segment from x_begin to x_end during [t, t + dt].
void propagate_density(TrajectoryState& state, double x_begin, double x_end, double t, double dt,
                       const ModelParams& params, const DriveParams& drive,
                       const FloquetWeights& weights);

struct EnsembleResult {
  Method method = Method::FSH;
  int n_traj = 0;
  int n_aborted = 0;
  std::vector<double> t;
  std::vector<double> pop, pop_err;
  std::vector<double> ekin, ekin_err;
  std::vector<double> pop_imag;  // FaSH-density: mean Im P1
  std::uint64_t hops_up = 0;
  std::uint64_t hops_down = 0;
  /// Largest |P0 + P1 - 1| seen at any output time (FaSH-density).
  double max_density_defect = 0.0;

  TimeSeries to_series() const;
};

/// Number of worker threads: `requested` if non-zero, else hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Runs the ensemble. Trajectories are processed in fixed blocks reduced in
/// block order, so the result is bitwise independent of the worker count.
/// Throws RuntimeAbort when more than 0.1 % of trajectories abort.
EnsembleResult run_ensemble(const RunSettings& settings);

}  // namespace floquet_hop
