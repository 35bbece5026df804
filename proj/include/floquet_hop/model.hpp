#pragma once

// Anderson-Holstein impurity model: parameters and the two diabatic surfaces.
//
// Natural units throughout (hbar = 1, m = 1). The renormalized level Ed_bar is
// the primary input; the bare level Ed = Ed_bar + g^2/omega enters the
// classical energy gap.

#include <stdexcept>
#include <string>

namespace floquet_hop {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Surface : int { Unoccupied = 0, Occupied = 1 };

inline Surface other(Surface s) {
  return s == Surface::Unoccupied ? Surface::Occupied : Surface::Unoccupied;
}

struct ModelParams {
  double Ed_bar = 0.0;   // renormalized impurity level
  double g = 0.0;        // electron-phonon coupling
  double omega = 1.0;    // oscillator quantum
  double Gamma = 1.0;    // hybridization (wide-band)
  double kT_el = 1.0;    // electronic bath temperature
  double kT_nuc0 = 1.0;  // initial nuclear temperature
  double mass = 1.0;
  double hbar = 1.0;

  /// Throws ModelError listing the first violated invariant.
  void validate() const;

  double reorganization_energy() const { return g * g / omega; }
  double bare_level() const { return Ed_bar + reorganization_energy(); }
  /// Coefficient of x in the occupied-state potential: sqrt(2 m omega / hbar) g.
  double linear_coupling() const;
  /// Dimensionless displacement g / (hbar omega) between the two wells.
  double displacement() const { return g / (hbar * omega); }
};

struct DriveParams {
  double A = 0.0;
  double Omega = 0.0;

  void validate() const;
  bool driven() const { return A > 0.0; }
  /// z = A / (hbar Omega); zero when undriven.
  double z() const { return A > 0.0 ? A / Omega : 0.0; }
  double period() const;
};

/// Ed - g^2/omega.
double renormalize(double Ed, double g, double omega);
/// Inverse of renormalize.
double bare_level(double Ed_bar, double g, double omega);

double potential(const ModelParams& params, Surface surface, double x);
double force(const ModelParams& params, Surface surface, double x);
/// V1(x) - V0(x) = Ed + sqrt(2 m omega) g x.
double gap(const ModelParams& params, double x);

}  // namespace floquet_hop
