#pragma once

// Canonical parameter sets of the five benchmark figures. Shared physics:
// Gamma = 1, omega = 0.3, g = 0.75; the nucleus starts thermalized at the
// bath temperature in the unoccupied well.

#include <string>
#include <string_view>
#include <vector>

#include "floquet_hop/config.hpp"

namespace floquet_hop {

struct PresetCase {
  std::string label;  // file prefix, e.g. "fig3_Omega1"
  SimConfig config;
  std::vector<Method> methods;
};

struct FigurePreset {
  std::string name;
  std::vector<PresetCase> cases;
};

std::vector<std::string> preset_names();

/// Throws ConfigError for an unknown name.
FigurePreset figure_preset(std::string_view name);

/// Base config for the shared figure physics at the given level, temperature and drive.
SimConfig figure_config(double Ed_bar, double kT, double A, double Omega, double t_final);

}  // namespace floquet_hop
