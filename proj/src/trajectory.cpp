#include "floquet_hop/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace floquet_hop {

namespace {

constexpr int kBlockSize = 128;

struct EnsembleContext {
  const RunSettings& settings;
  HopMethod method;
  FloquetWeights weights;
  ReplicaFermi replica;
  int n_steps;
  int n_out;
  double rate_scale;  // Gamma / hbar
};

struct BlockResult {
  std::vector<double> pop, pop2, ekin, ekin2, pop_imag;
  int n_ok = 0;
  int n_aborted = 0;
  std::uint64_t hops_up = 0;
  std::uint64_t hops_down = 0;
  double max_density_defect = 0.0;
};

HopRates rates_from(cplx f, double scale) { return {scale * f, scale * (1.0 - f)}; }

// Plain complex product; avoids the NaN-recovery path of operator*.
cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

cplx density_slope(cplx p0, cplx p1, const HopRates& r) { return mul(r.up, p0) - mul(r.down, p1); }

BlockResult run_block(const EnsembleContext& ctx, int first, int count) {
  const RunSettings& s = ctx.settings;
  const ModelParams& params = s.model;
  const int n_rep = ctx.replica.size();
  const bool density = ctx.method == HopMethod::FaSHDensity;
  const bool instantaneous_hops = ctx.method == HopMethod::FSH;
  const bool need_coeffs = (instantaneous_hops || density) && ctx.weights.n_max > 0;

  std::vector<TrajectoryState> states;
  std::vector<TrajectoryRng> rngs;
  states.reserve(count);
  rngs.reserve(count);
  for (int b = 0; b < count; ++b) {
    const auto index = static_cast<std::uint64_t>(first + b);
    rngs.emplace_back(s.seed, index);
    states.push_back(sample_one(rngs.back(), params, index));
  }

  const auto n_out = static_cast<std::size_t>(ctx.n_out);
  std::vector<double> sample_pop(n_out * count), sample_ek(n_out * count), sample_im(n_out * count);
  std::vector<char> aborted(count, 0);
  std::vector<double> fv_old(density ? static_cast<std::size_t>(count * n_rep) : 0);
  std::vector<double> fv_new(n_rep), fv_mid(n_rep);
  std::vector<double> max_defect(count, 0.0);

  BlockResult out;

  std::vector<cplx> c_old, c_mid, c_new;
  if (need_coeffs) c_old = replica_coefficients(0.0, s.drive, ctx.weights);
  else c_old.assign(n_rep, cplx{1.0, 0.0});  // n_max == 0: f~ = f
  c_mid = c_new = c_old;

  if (density) {
    for (int b = 0; b < count; ++b) {
      ctx.replica.evaluate(gap(params, states[b].x),
                           std::span<double>(fv_old.data() + b * n_rep, n_rep));
    }
  }

  auto record = [&](std::size_t o) {
    for (int b = 0; b < count; ++b) {
      const TrajectoryState& st = states[b];
      const std::size_t idx = o * count + b;
      sample_ek[idx] = 0.5 * st.p * st.p / params.mass;
      if (density) {
        sample_pop[idx] = st.P1.real();
        sample_im[idx] = st.P1.imag();
        max_defect[b] = std::max(max_defect[b], std::abs(st.P0 + st.P1 - 1.0));
      } else {
        sample_pop[idx] = st.surface == Surface::Occupied ? 1.0 : 0.0;
        sample_im[idx] = 0.0;
      }
    }
  };

  record(0);
  std::size_t o = 1;
  const double dt = s.dt;
  for (int k = 1; k <= ctx.n_steps; ++k) {
    const double t_new = k * dt;
    if (need_coeffs) {
      c_old.swap(c_new);
      c_new = replica_coefficients(t_new, s.drive, ctx.weights);
      if (density) c_mid = replica_coefficients(t_new - 0.5 * dt, s.drive, ctx.weights);
    }
    for (int b = 0; b < count; ++b) {
      if (aborted[b]) continue;
      TrajectoryState& st = states[b];
      const double x_old = st.x;
      verlet_step(st, params, dt);

      ctx.replica.evaluate(gap(params, st.x), fv_new);
      const cplx f_hop = instantaneous_hops ? ReplicaFermi::instantaneous(fv_new, c_new)
                                            : cplx{ctx.replica.average(fv_new), 0.0};
      const Surface before = st.surface;
      if (attempt_hop(st, rates_from(f_hop, ctx.rate_scale), dt, rngs[b].uniform())) {
        if (before == Surface::Unoccupied) ++out.hops_up;
        else ++out.hops_down;
      }

      if (density) {
        std::span<double> old_row(fv_old.data() + b * n_rep, n_rep);
        ctx.replica.evaluate(gap(params, 0.5 * (x_old + st.x)), fv_mid);
        const HopRates r0 = rates_from(ReplicaFermi::instantaneous(old_row, c_old), ctx.rate_scale);
        const HopRates r1 = rates_from(ReplicaFermi::instantaneous(fv_mid, c_mid), ctx.rate_scale);
        const HopRates r2 = rates_from(ReplicaFermi::instantaneous(fv_new, c_new), ctx.rate_scale);
        propagate_density(st, r0, r1, r2, dt);
        std::copy(fv_new.begin(), fv_new.end(), old_row.begin());
      }
      if (!std::isfinite(st.x) || !std::isfinite(st.p) || !std::isfinite(st.P1.real()) ||
          !std::isfinite(st.P1.imag())) {
        aborted[b] = 1;
      }
    }
    if (k % s.output_stride == 0) record(o++);
  }

  out.pop.assign(n_out, 0.0);
  out.pop2.assign(n_out, 0.0);
  out.ekin.assign(n_out, 0.0);
  out.ekin2.assign(n_out, 0.0);
  out.pop_imag.assign(n_out, 0.0);
  for (int b = 0; b < count; ++b) {
    if (aborted[b]) {
      ++out.n_aborted;
      continue;
    }
    ++out.n_ok;
    out.max_density_defect = std::max(out.max_density_defect, max_defect[b]);
    for (std::size_t q = 0; q < n_out; ++q) {
      const std::size_t idx = q * count + b;
      out.pop[q] += sample_pop[idx];
      out.pop2[q] += sample_pop[idx] * sample_pop[idx];
      out.ekin[q] += sample_ek[idx];
      out.ekin2[q] += sample_ek[idx] * sample_ek[idx];
      out.pop_imag[q] += sample_im[idx];
    }
  }
  return out;
}

double standard_error(double sum, double sum2, int n) {
  if (n < 2) return 0.0;
  const double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1));
  return std::sqrt(var / n);
}

}  // namespace

HopMethod hop_method(Method m) {
  switch (m) {
    case Method::FSH: return HopMethod::FSH;
    case Method::FaSH: return HopMethod::FaSH;
    case Method::FaSHDensity: return HopMethod::FaSHDensity;
    default: throw std::invalid_argument("hop_method: not a trajectory method");
  }
}

TrajectoryRng::TrajectoryRng(std::uint64_t master_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  engine_.seed(seq);
}

double TrajectoryRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double TrajectoryRng::normal(double mean, double stddev) {
  return normal_(engine_, std::normal_distribution<double>::param_type(mean, stddev));
}

TrajectoryState sample_one(TrajectoryRng& rng, const ModelParams& params, std::uint64_t index) {
  TrajectoryState s;
  s.stream = index;
  const double kT = params.kT_nuc0;
  s.x = rng.normal(0.0, std::sqrt(kT / (params.mass * params.omega * params.omega)));
  s.p = rng.normal(0.0, std::sqrt(params.mass * kT));
  return s;
}

std::vector<TrajectoryState> sample_initial(int n_traj, const ModelParams& params,
                                            std::uint64_t master_seed) {
  if (n_traj < 1) throw std::invalid_argument("sample_initial: n_traj must be >= 1");
  std::vector<TrajectoryState> out;
  out.reserve(n_traj);
  for (int k = 0; k < n_traj; ++k) {
    TrajectoryRng rng(master_seed, static_cast<std::uint64_t>(k));
    out.push_back(sample_one(rng, params, static_cast<std::uint64_t>(k)));
  }
  return out;
}

void verlet_step(TrajectoryState& s, const ModelParams& params, double dt) {
  s.p += 0.5 * dt * force(params, s.surface, s.x);
  s.x += dt * s.p / params.mass;
  s.p += 0.5 * dt * force(params, s.surface, s.x);
}

HopRates hop_rates(double x, double t, RateKind kind, const ModelParams& params,
                   const DriveParams& drive, const FloquetWeights& weights) {
  const double dv = gap(params, x);
  const cplx f = kind == RateKind::Instantaneous
                     ? fermi_floquet_t(dv, t, drive, weights, params.kT_el)
                     : cplx{fermi_floquet_avg(dv, drive, weights, params.kT_el), 0.0};
  return rates_from(f, params.Gamma / params.hbar);
}

bool attempt_hop(TrajectoryState& state, const HopRates& rates, double dt, double xi) {
  const cplx rate = state.surface == Surface::Unoccupied ? rates.up : rates.down;
  const double probability = std::max(rate.real(), 0.0) * dt;
  if (xi < probability) {
    state.surface = other(state.surface);
    return true;
  }
  return false;
}

void propagate_density(TrajectoryState& s, const HopRates& begin, const HopRates& mid,
                       const HopRates& end, double dt) {
  // dP1 = up P0 - down P1 and dP0 = -dP1, so the sum is conserved stage by stage.
  const cplx p0 = s.P0;
  const cplx p1 = s.P1;
  const cplx k1 = density_slope(p0, p1, begin);
  const cplx k2 = density_slope(p0 - 0.5 * dt * k1, p1 + 0.5 * dt * k1, mid);
  const cplx k3 = density_slope(p0 - 0.5 * dt * k2, p1 + 0.5 * dt * k2, mid);
  const cplx k4 = density_slope(p0 - dt * k3, p1 + dt * k3, end);
  const cplx delta = dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  s.P1 = p1 + delta;
  s.P0 = p0 - delta;
}

void propagate_density(TrajectoryState& state, double x_begin, double x_end, double t, double dt,
                       const ModelParams& params, const DriveParams& drive,
                       const FloquetWeights& weights) {
  const auto r0 = hop_rates(x_begin, t, RateKind::Instantaneous, params, drive, weights);
  const auto r1 = hop_rates(0.5 * (x_begin + x_end), t + 0.5 * dt, RateKind::Instantaneous, params,
                            drive, weights);
  const auto r2 = hop_rates(x_end, t + dt, RateKind::Instantaneous, params, drive, weights);
  propagate_density(state, r0, r1, r2, dt);
}

TimeSeries EnsembleResult::to_series() const {
  TimeSeries series(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    series[k].t = t[k];
    series[k].pop = pop[k];
    series[k].pop_err = pop_err[k];
    series[k].ekin = ekin[k];
    series[k].ekin_err = ekin_err[k];
  }
  return series;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleResult run_ensemble(const RunSettings& s) {
  if (s.n_traj < 100) throw std::invalid_argument("run_ensemble: n_traj must be >= 100");
  if (!(s.dt > 0.0)) throw std::invalid_argument("run_ensemble: dt must be positive");
  if (s.output_stride < 1) throw std::invalid_argument("run_ensemble: output_stride must be >= 1");
  s.model.validate();
  s.drive.validate();

  const FloquetWeights weights = bessel_weights(s.drive);
  EnsembleContext ctx{s,
                      hop_method(s.method),
                      weights,
                      ReplicaFermi(s.drive, weights, s.model.kT_el),
                      s.n_steps(),
                      s.n_steps() / s.output_stride + 1,
                      s.model.Gamma / s.model.hbar};

  const int n_blocks = (s.n_traj + kBlockSize - 1) / kBlockSize;
  std::vector<BlockResult> blocks(n_blocks);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (int blk = next++; blk < n_blocks && !failed; blk = next++) {
      try {
        const int first = blk * kBlockSize;
        blocks[blk] = run_block(ctx, first, std::min(kBlockSize, s.n_traj - first));
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const unsigned n_workers = std::min<unsigned>(resolve_threads(s.threads), n_blocks);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleResult r;
  r.method = s.method;
  const auto n_out = static_cast<std::size_t>(ctx.n_out);
  std::vector<double> pop(n_out, 0.0), pop2(n_out, 0.0), ek(n_out, 0.0), ek2(n_out, 0.0),
      im(n_out, 0.0);
  int n_ok = 0;
  for (const BlockResult& b : blocks) {
    n_ok += b.n_ok;
    r.n_aborted += b.n_aborted;
    r.hops_up += b.hops_up;
    r.hops_down += b.hops_down;
    r.max_density_defect = std::max(r.max_density_defect, b.max_density_defect);
    for (std::size_t q = 0; q < n_out; ++q) {
      pop[q] += b.pop[q];
      pop2[q] += b.pop2[q];
      ek[q] += b.ekin[q];
      ek2[q] += b.ekin2[q];
      im[q] += b.pop_imag[q];
    }
  }
  r.n_traj = n_ok;
  if (r.n_aborted * 1000 > s.n_traj) {
    throw RuntimeAbort(fmt::format("{} of {} trajectories aborted (limit 0.1%)", r.n_aborted,
                                   s.n_traj));
  }
  r.t.resize(n_out);
  r.pop.resize(n_out);
  r.pop_err.resize(n_out);
  r.ekin.resize(n_out);
  r.ekin_err.resize(n_out);
  r.pop_imag.resize(n_out);
  for (std::size_t q = 0; q < n_out; ++q) {
    r.t[q] = static_cast<double>(q) * s.output_stride * s.dt;
    r.pop[q] = pop[q] / n_ok;
    r.pop_err[q] = standard_error(pop[q], pop2[q], n_ok);
    r.ekin[q] = ek[q] / n_ok;
    r.ekin_err[q] = standard_error(ek[q], ek2[q], n_ok);
    r.pop_imag[q] = im[q] / n_ok;
  }
  return r;
}

}  // namespace floquet_hop
