#pragma once

// Simulation configuration: an INI document with [model], [drive] and [run]
// sections.
//
//   [model]  Ed_bar, g, omega, Gamma, kT, kT_nuc0   (all required)
//            mass, hbar                             (optional, must be 1)
//   [drive]  A (required), Omega (required when A > 0)
//   [run]    method, t_final, dt, output_stride, output_interval, n_traj,
//            basis_N, seed, output                  (all optional)
//
// Numerical defaults:
//   t_final          20 / Gamma
//   output_interval  0.1 (time between records when output_stride is absent)
//   dt               largest step <= dt_max(method) that divides output_interval
//   n_traj           20000
//   basis_N          max(40, thermal basis at kT_nuc0 and kT)
//   seed             1

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "floquet_hop/model.hpp"
#include "floquet_hop/types.hpp"

namespace floquet_hop {

/// Collects every violation found while parsing or validating a config.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct SimConfig {
  std::optional<Method> method;
  ModelParams model;
  DriveParams drive;
  double t_final = 0.0;
  std::optional<double> dt;
  std::optional<int> output_stride;
  double output_interval = 0.1;
  int n_traj = 20000;
  std::optional<int> basis_N;
  std::uint64_t seed = 1;
  std::string output;
};

SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);

/// Renders a config back to the INI format accepted by parse_config.
std::string format_config(const SimConfig& config);

/// Largest admissible time step for a method under the given drive. For
/// matrix methods basis_N bounds the spectral radius of the generator.
double max_time_step(Method method, const ModelParams& model, const DriveParams& drive,
                     int basis_N = 0);

/// Worker-count cap from FLOQUET_HOP_THREADS (0 or unset = automatic).
unsigned threads_from_environment();

/// Resolves defaults for one method. Throws ConfigError on invalid settings.
RunSettings resolve(const SimConfig& config, Method method);

/// Levenshtein distance, used for key suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace floquet_hop
