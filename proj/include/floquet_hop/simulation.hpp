#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "floquet_hop/analysis.hpp"
#include "floquet_hop/config.hpp"
#include "floquet_hop/types.hpp"

namespace floquet_hop {

struct RunOutput {
  RunSettings settings;
  TimeSeries series;
  std::vector<double> pop_imag;  // Im Tr rho1 or mean Im P1; zeros otherwise
  std::uint64_t hops_up = 0;
  std::uint64_t hops_down = 0;
  int n_aborted = 0;
};

/// Dispatches to the matrix propagator or the trajectory ensemble.
RunOutput run(const RunSettings& settings);

struct SummaryRow {
  std::string label;
  Method method = Method::FQME;
  SteadyState steady;
  std::string csv;
};

/// Runs every listed method on identical physics and writes
/// `<prefix><method>.csv` into out_dir, one file per method.
std::vector<SummaryRow> compare(const SimConfig& config, std::span<const Method> methods,
                                const std::filesystem::path& out_dir, const std::string& prefix);

/// summary.csv: label,method,pop,pop_err,ekin,ekin_err,pop_slope,flat,csv
void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);

}  // namespace floquet_hop
