#include <doctest.h>

#include <cmath>
#include <random>

#include "floquet_hop/fqme.hpp"
#include "oracles.hpp"

using namespace floquet_hop;

namespace {

ModelParams small_params() {
  ModelParams p;
  p.Ed_bar = -0.3;
  p.g = 0.24;
  p.omega = 0.3;
  p.Gamma = 0.8;
  p.kT_el = 0.6;
  p.kT_nuc0 = 0.1;
  return p;
}

Eigen::MatrixXcd random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

}  // namespace

TEST_CASE("matrix generator matches the element-wise oracle") {
  const ModelParams p = small_params();
  std::mt19937 rng(11);
  for (int n : {2, 6}) {
    for (auto mode : {MatrixMode::FQME, MatrixMode::FaQME}) {
      const DriveParams d{0.5, 0.7};
      const FqmeEngine engine(p, d, mode, n);
      DensityMatrixPair s{random_matrix(n, rng), random_matrix(n, rng), 0.0};
      DensityMatrixPair out;
      const double t = 0.83;
      engine.derivative(s, t, out);

      const auto fc = fc_table(n, p.displacement());
      const int n_max = bessel_weights(d).n_max;
      auto phi = [&](int ip, int k) -> cplx {
        const double x = p.omega * (ip - k) + p.Ed_bar;
        return mode == MatrixMode::FQME ? oracle::floquet_fermi_double_sum(x, t, d.A, d.Omega, p.kT_el, n_max)
                                        : oracle::floquet_fermi_average_sum(x, d.A, d.Omega, p.kT_el, n_max);
      };
      const auto [d0, d1] = oracle::qme_rhs(s.rho0, s.rho1, fc.F, p.omega, p.Ed_bar, p.Gamma, phi);
      CAPTURE(n);
      CHECK((out.rho0 - d0).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((out.rho1 - d1).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("undriven FQME reproduces a plain-Fermi master equation") {
  const ModelParams p = small_params();
  const int n = 10;
  const FqmeEngine engine(p, DriveParams{}, MatrixMode::FQME, n);
  DensityMatrixPair s = engine.initial_state();

  const auto fc = fc_table(n, p.displacement());
  auto phi = [&](int ip, int k) -> cplx { return oracle::fermi(p.omega * (ip - k) + p.Ed_bar, p.kT_el); };
  Eigen::MatrixXcd r0 = s.rho0, r1 = s.rho1;
  const double dt = 0.05;
  for (int k = 0; k < 100; ++k) {
    auto f = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
      return oracle::qme_rhs(a, b, fc.F, p.omega, p.Ed_bar, p.Gamma, phi);
    };
    const auto k1 = f(r0, r1);
    const auto k2 = f(r0 + 0.5 * dt * k1.first, r1 + 0.5 * dt * k1.second);
    const auto k3 = f(r0 + 0.5 * dt * k2.first, r1 + 0.5 * dt * k2.second);
    const auto k4 = f(r0 + dt * k3.first, r1 + dt * k3.second);
    r0 += dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
    r1 += dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
    engine.step(s, dt);
  }
  CHECK((s.rho0 - r0).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((s.rho1 - r1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("thermal state is stationary without drive") {
  ModelParams p;
  p.Ed_bar = -2.0;
  p.g = 0.75;
  p.omega = 0.3;
  p.Gamma = 1.0;
  p.kT_el = 1.0;
  p.kT_nuc0 = 1.0;
  const int n = 73;
  const FqmeEngine engine(p, DriveParams{}, MatrixMode::FQME, n);

  // Equilibrium: rho0 = (1-f) Boltzmann in H0 basis, rho1 = f Boltzmann in H1 basis.
  const DensityMatrixPair b = engine.initial_state();
  const double f = oracle::fermi(p.Ed_bar, p.kT_el);
  DensityMatrixPair eq{(1.0 - f) * b.rho0, f * b.rho0, 0.0};
  DensityMatrixPair out;
  engine.derivative(eq, 0.0, out);
  CHECK(out.rho0.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(out.rho1.cwiseAbs().maxCoeff() < 1e-10);

  const MatrixObservables o = engine.observables(eq);
  CHECK(o.population == doctest::Approx(0.8807970779778823).epsilon(1e-12));
  CHECK(o.kinetic == doctest::Approx(0.25 * p.omega / std::tanh(0.5 * p.omega / p.kT_nuc0)).epsilon(1e-8));
  CHECK(o.kinetic == doctest::Approx(0.50374).epsilon(1e-4));
}

TEST_CASE("trace conservation and Hermiticity along driven runs") {
  ModelParams p;
  p.Ed_bar = 0.0;
  p.g = 0.75;
  p.omega = 0.3;
  p.Gamma = 1.0;
  p.kT_el = 1.0;
  p.kT_nuc0 = 0.3;
  const DriveParams d{1.0, 1.0};
  for (auto mode : {MatrixMode::FQME, MatrixMode::FaQME}) {
    const FqmeEngine engine(p, d, mode, 40);
    DensityMatrixPair s = engine.initial_state();
    double worst_trace = 0.0, worst_herm = 0.0;
    for (int k = 0; k < 200; ++k) {
      engine.step(s, 0.05);
      worst_trace = std::max(worst_trace, std::abs(s.trace() - 1.0));
      worst_herm = std::max(worst_herm, s.hermiticity_defect());
    }
    CHECK(worst_trace < 1e-6);
    if (mode == MatrixMode::FaQME) CHECK(worst_herm < 1e-8);
    const auto o = engine.observables(s);
    CHECK(o.population > 0.0);
    CHECK(o.population < 1.0);
  }
}

TEST_CASE("RK4 step-halving shows fourth-order convergence") {
  const ModelParams p = small_params();
  const DriveParams d{0.6, 0.9};
  const FqmeEngine engine(p, d, MatrixMode::FQME, 10);
  auto pop_at = [&](double dt) {
    DensityMatrixPair s = engine.initial_state();
    const int steps = static_cast<int>(std::lround(4.0 / dt));
    for (int k = 0; k < steps; ++k) {
      engine.step(s, dt);
      s.t = (k + 1) * dt;
    }
    return engine.observables(s).population;
  };
  const double a = pop_at(0.4), b = pop_at(0.2), c = pop_at(0.1);
  const double ratio = (a - b) / (b - c);
  CAPTURE(ratio);
  CHECK(std::abs(ratio - 16.0) < 3.0);
}

TEST_CASE("initial state and kinetic matrix") {
  ModelParams p = small_params();
  p.kT_nuc0 = 1.0;
  CHECK_THROWS_AS(initial_state(p, 40), std::invalid_argument);
  CHECK(thermal_basis_size(0.3, 1.0) == 73);
  const DensityMatrixPair s = initial_state(p, 73);
  CHECK(std::abs(s.trace() - 1.0) < 1e-14);
  CHECK(s.rho1.cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd k = kinetic_matrix(5, 0.3);
  CHECK(k(0, 0) == doctest::Approx(0.075));
  CHECK(k(0, 2) == doctest::Approx(-0.075 * std::sqrt(2.0)));
  CHECK(k(2, 0) == k(0, 2));
  CHECK(k(0, 1) == 0.0);
}
