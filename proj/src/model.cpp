#include "floquet_hop/model.hpp"

#include <cmath>
#include <numbers>

namespace floquet_hop {

void ModelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ModelError(what);
  };
  require(std::isfinite(Ed_bar) && std::isfinite(g), "Ed_bar and g must be finite");
  require(omega > 0.0, "omega must be positive");
  require(Gamma > 0.0, "Gamma must be positive");
  require(kT_el > 0.0, "kT must be positive");
  require(kT_nuc0 > 0.0, "kT_nuc0 must be positive");
  require(mass == 1.0, "mass is fixed to 1");
  require(hbar == 1.0, "hbar is fixed to 1");
}

double ModelParams::linear_coupling() const {
  return std::sqrt(2.0 * mass * omega / hbar) * g;
}

void DriveParams::validate() const {
  if (!(A >= 0.0) || !std::isfinite(A)) throw ModelError("A must be non-negative");
  if (A > 0.0 && !(Omega > 0.0)) throw ModelError("Omega must be positive when A > 0");
  if (Omega < 0.0) throw ModelError("Omega must be non-negative");
}

double DriveParams::period() const {
  return Omega > 0.0 ? 2.0 * std::numbers::pi / Omega : 0.0;
}

double renormalize(double Ed, double g, double omega) {
  if (!(omega > 0.0)) throw ModelError("omega must be positive");
  return Ed - g * g / omega;
}

double bare_level(double Ed_bar, double g, double omega) {
  if (!(omega > 0.0)) throw ModelError("omega must be positive");
  return Ed_bar + g * g / omega;
}

double potential(const ModelParams& params, Surface surface, double x) {
  const double harmonic = 0.5 * params.mass * params.omega * params.omega * x * x;
  if (surface == Surface::Unoccupied) return harmonic;
  return harmonic + params.linear_coupling() * x + params.bare_level();
}

double force(const ModelParams& params, Surface surface, double x) {
  const double restoring = -params.mass * params.omega * params.omega * x;
  if (surface == Surface::Unoccupied) return restoring;
  return restoring - params.linear_coupling();
}

double gap(const ModelParams& params, double x) {
  return params.bare_level() + params.linear_coupling() * x;
}

}  // namespace floquet_hop
