#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "floquet_hop/model.hpp"

namespace floquet_hop {

enum class Method { FQME, FaQME, FSH, FaSH, FaSHDensity };

inline constexpr Method kAllMethods[] = {Method::FQME, Method::FSH, Method::FaQME, Method::FaSH,
                                         Method::FaSHDensity};

std::string_view method_name(Method m);
/// Case-sensitive match against method_name(); nullopt when unknown.
std::optional<Method> parse_method(std::string_view name);

inline bool is_matrix_method(Method m) { return m == Method::FQME || m == Method::FaQME; }
/// Methods whose rates use the time-dependent Floquet Fermi function somewhere.
inline bool is_time_resolved(Method m) {
  return m == Method::FQME || m == Method::FSH || m == Method::FaSHDensity;
}

/// A numerical run failed part-way (non-finite state, too many aborted trajectories).
class RuntimeAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TimeSeriesRecord {
  double t = 0.0;
  double pop = 0.0;
  double pop_err = 0.0;
  double ekin = 0.0;
  double ekin_err = 0.0;
  double trace_defect = 0.0;
  double herm_defect = 0.0;
};

using TimeSeries = std::vector<TimeSeriesRecord>;

/// Fully resolved numerical settings for one method on one parameter set.
struct RunSettings {
  Method method = Method::FQME;
  ModelParams model;
  DriveParams drive;
  double dt = 0.01;
  double t_final = 20.0;
  int output_stride = 10;
  int n_traj = 20000;
  int basis_N = 40;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency

  int n_steps() const;
};

}  // namespace floquet_hop
