#include "floquet_hop/fqme.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace floquet_hop {

namespace {

constexpr cplx kI{0.0, 1.0};

void axpy(DensityMatrixPair& out, const DensityMatrixPair& base, double h,
          const DensityMatrixPair& slope) {
  out.rho0 = base.rho0 + h * slope.rho0;
  out.rho1 = base.rho1 + h * slope.rho1;
}

}  // namespace

double DensityMatrixPair::hermiticity_defect() const {
  const double d0 = (rho0 - rho0.adjoint()).cwiseAbs().maxCoeff();
  const double d1 = (rho1 - rho1.adjoint()).cwiseAbs().maxCoeff();
  return std::max(d0, d1);
}

bool DensityMatrixPair::finite() const { return rho0.allFinite() && rho1.allFinite(); }

GeneratorTensors build_generators(const ModelParams& params, const FranckCondonTable& fc) {
  GeneratorTensors gen;
  const int n = fc.N;
  gen.N = n;
  gen.Gamma = params.Gamma;
  gen.eps0.resize(n);
  gen.eps1.resize(n);
  for (int i = 0; i < n; ++i) {
    gen.eps0(i) = params.hbar * params.omega * (i + 0.5);
    gen.eps1(i) = params.hbar * params.omega * (i + 0.5) + params.Ed_bar;
  }
  gen.F = fc.F;
  gen.Fc = fc.F.cast<cplx>();
  gen.Fct = gen.Fc.transpose();
  gen.fermi_args.resize(static_cast<std::size_t>(2 * n - 1));
  for (int d = -(n - 1); d <= n - 1; ++d) {
    gen.fermi_args[d + n - 1] = params.hbar * params.omega * d + params.Ed_bar;
  }
  return gen;
}

int thermal_basis_size(double omega, double kT, double rel_tol) {
  const double ratio = std::exp(-omega / kT);
  double z = 0.0;
  double w = 1.0;
  for (int n = 1; n <= 100000; ++n) {
    z += w;
    w *= ratio;  // weight of level n relative to the ground state
    if (w / z < rel_tol) return n;
  }
  throw std::invalid_argument("thermal_basis_size: temperature too high for any basis");
}

DensityMatrixPair initial_state(const ModelParams& params, int N) {
  const double ratio = std::exp(-params.omega / params.kT_nuc0);
  Eigen::VectorXd w(N);
  double z = 0.0;
  double wi = 1.0;
  for (int i = 0; i < N; ++i) {
    w(i) = wi;
    z += wi;
    wi *= ratio;
  }
  if (wi / z >= 1e-10) {
    throw std::invalid_argument(fmt::format(
        "initial_state: basis N = {} truncates the Boltzmann distribution at kT_nuc0 = {}; "
        "need N >= {}",
        N, params.kT_nuc0, thermal_basis_size(params.omega, params.kT_nuc0)));
  }
  DensityMatrixPair s;
  s.rho0 = Eigen::MatrixXcd::Zero(N, N);
  s.rho1 = Eigen::MatrixXcd::Zero(N, N);
  for (int i = 0; i < N; ++i) s.rho0(i, i) = w(i) / z;
  return s;
}

Eigen::MatrixXd kinetic_matrix(int N, double omega) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    k(i, i) = 0.25 * omega * (2.0 * i + 1.0);
    if (i + 2 < N) {
      const double off = -0.25 * omega * std::sqrt((i + 1.0) * (i + 2.0));
      k(i, i + 2) = off;
      k(i + 2, i) = off;
    }
  }
  return k;
}

MatrixObservables observables(const DensityMatrixPair& state, const Eigen::MatrixXd& kinetic) {
  MatrixObservables o;
  const cplx pop = state.rho1.trace();
  o.population = pop.real();
  o.population_imag = pop.imag();
  // Tr(rho K) = sum_ij rho_ij K_ji; K is symmetric.
  const cplx ek = (state.rho0 + state.rho1).cwiseProduct(kinetic.cast<cplx>()).sum();
  o.kinetic = ek.real();
  return o;
}

FqmeEngine::FqmeEngine(const ModelParams& params, const DriveParams& drive, MatrixMode mode,
                       int N, double weights_tol)
    : params_(params), drive_(drive), mode_(mode) {
  params_.validate();
  drive_.validate();
  if (N < 1) throw std::invalid_argument("FqmeEngine: N must be >= 1");
  weights_ = bessel_weights(drive_, weights_tol);
  gen_ = build_generators(params_, fc_table(N, params_.displacement()));
  kinetic_ = kinetic_matrix(N, params_.omega);

  const ReplicaFermi replica(drive_, weights_, params_.kT_el);
  replica_values_.resize(static_cast<Eigen::Index>(gen_.fermi_args.size()), replica.size());
  std::vector<double> row(static_cast<std::size_t>(replica.size()));
  for (std::size_t d = 0; d < gen_.fermi_args.size(); ++d) {
    replica.evaluate(gen_.fermi_args[d], row);
    for (int m = 0; m < replica.size(); ++m) replica_values_(static_cast<Eigen::Index>(d), m) = row[m];
  }

  static_generator_ = mode_ == MatrixMode::FaQME || !drive_.driven();
  if (static_generator_) assemble(fermi_factors(0.0), a_, y_, m0_, m1_);
}

Eigen::VectorXcd FqmeEngine::fermi_factors(double t) const {
  const int n_rep = weights_.size();
  if (mode_ == MatrixMode::FaQME || weights_.n_max == 0) {
    Eigen::VectorXd jsq(n_rep);
    for (int k = 0; k < n_rep; ++k) jsq(k) = weights_.J[k] * weights_.J[k];
    return (replica_values_ * jsq).cast<cplx>();
  }
  const auto c = replica_coefficients(t, drive_, weights_);
  const Eigen::Map<const Eigen::VectorXcd> coeffs(c.data(), n_rep);
  return replica_values_.cast<cplx>() * coeffs;
}

void FqmeEngine::assemble(const Eigen::VectorXcd& fermi, Eigen::MatrixXcd& a,
                          Eigen::MatrixXcd& y, Eigen::MatrixXcd& m0,
                          Eigen::MatrixXcd& m1) const {
  const int n = gen_.N;
  a.resize(n, n);
  y.resize(n, n);
  // a(i', k) = f~(eps1(i') - eps0(k)) F(k, i');  y = (1 - f~) F^T elementwise.
  for (int k = 0; k < n; ++k) {
    for (int ip = 0; ip < n; ++ip) {
      const cplx f = fermi(gen_.arg_index(ip, k));
      const double fc = gen_.F(k, ip);
      a(ip, k) = f * fc;
      y(ip, k) = (1.0 - f) * fc;
    }
  }
  m0.noalias() = gen_.Fc * a;
  m1.noalias() = gen_.Fct * y.transpose();
}

void FqmeEngine::derivative(const DensityMatrixPair& s, double t, DensityMatrixPair& out) const {
  const Eigen::MatrixXcd* a = &a_;
  const Eigen::MatrixXcd* y = &y_;
  const Eigen::MatrixXcd* m0 = &m0_;
  const Eigen::MatrixXcd* m1 = &m1_;
  if (!static_generator_) {
    assemble(fermi_factors(t), wa_, wy_, wm0_, wm1_);
    a = &wa_;
    y = &wy_;
    m0 = &wm0_;
    m1 = &wm1_;
  }
  const double h = 0.5 * gen_.Gamma / params_.hbar;
  const int n = gen_.N;

  out.rho0.resize(n, n);
  out.rho1.resize(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      out.rho0(i, j) = -kI * ((gen_.eps0(i) - gen_.eps0(j)) / params_.hbar) * s.rho0(i, j);
      out.rho1(i, j) = -kI * ((gen_.eps1(i) - gen_.eps1(j)) / params_.hbar) * s.rho1(i, j);
    }
  }

  // Unoccupied block: loss to rho1 from both sides, gain from rho1.
  out.rho0.noalias() -= h * (*m0 * s.rho0);
  out.rho0.noalias() -= h * (s.rho0 * m0->transpose());
  w1_.noalias() = gen_.F * s.rho1;
  out.rho0.noalias() += h * (w1_ * *y);
  w2_.noalias() = y->transpose() * s.rho1;
  out.rho0.noalias() += h * (w2_ * gen_.F.transpose());

  // Occupied block.
  out.rho1.noalias() -= h * (*m1 * s.rho1);
  out.rho1.noalias() -= h * (s.rho1 * m1->transpose());
  w1_.noalias() = gen_.F.transpose() * s.rho0;
  out.rho1.noalias() += h * (w1_ * a->transpose());
  w2_.noalias() = *a * s.rho0;
  out.rho1.noalias() += h * (w2_ * gen_.F);
}

void FqmeEngine::step(DensityMatrixPair& s, double dt) const {
  const double t = s.t;
  derivative(s, t, k1_);
  axpy(tmp_, s, 0.5 * dt, k1_);
  derivative(tmp_, t + 0.5 * dt, k2_);
  axpy(tmp_, s, 0.5 * dt, k2_);
  derivative(tmp_, t + 0.5 * dt, k3_);
  axpy(tmp_, s, dt, k3_);
  derivative(tmp_, t + dt, k4_);
  const double w = dt / 6.0;
  s.rho0 += w * (k1_.rho0 + 2.0 * k2_.rho0 + 2.0 * k3_.rho0 + k4_.rho0);
  s.rho1 += w * (k1_.rho1 + 2.0 * k2_.rho1 + 2.0 * k3_.rho1 + k4_.rho1);
  s.t = t + dt;
  if (!s.finite()) {
    const double max0 = s.rho0.cwiseAbs().maxCoeff();
    const double max1 = s.rho1.cwiseAbs().maxCoeff();
    throw RuntimeAbort(fmt::format("FQME state became non-finite at t = {} (max|rho| = {})", s.t,
                                   std::max(max0, max1)));
  }
}

DensityMatrixPair FqmeEngine::initial_state() const {
  return floquet_hop::initial_state(params_, gen_.N);
}

MatrixObservables FqmeEngine::observables(const DensityMatrixPair& state) const {
  return floquet_hop::observables(state, kinetic_);
}

MatrixRunResult run_matrix(const RunSettings& settings) {
  if (!is_matrix_method(settings.method)) {
    throw std::invalid_argument("run_matrix: method is not a matrix method");
  }
  const MatrixMode mode = settings.method == Method::FQME ? MatrixMode::FQME : MatrixMode::FaQME;
  FqmeEngine engine(settings.model, settings.drive, mode, settings.basis_N);
  DensityMatrixPair state = engine.initial_state();

  MatrixRunResult result;
  result.basis_N = settings.basis_N;
  auto record = [&] {
    const MatrixObservables o = engine.observables(state);
    TimeSeriesRecord r;
    r.t = state.t;
    r.pop = o.population;
    r.ekin = o.kinetic;
    r.trace_defect = std::abs(state.trace() - 1.0);
    r.herm_defect = state.hermiticity_defect();
    result.series.push_back(r);
    result.population_imag.push_back(o.population_imag);
  };

  const int n_steps = settings.n_steps();
  record();
  for (int k = 1; k <= n_steps; ++k) {
    engine.step(state, settings.dt);
    state.t = k * settings.dt;  // avoid accumulated rounding in the time grid
    if (k % settings.output_stride == 0) record();
  }
  return result;
}

}  // namespace floquet_hop
