#include "floquet_hop/simulation.hpp"

#include <fstream>

#include <fmt/format.h>

#include "floquet_hop/fqme.hpp"
#include "floquet_hop/series_io.hpp"
#include "floquet_hop/trajectory.hpp"

namespace floquet_hop {

RunOutput run(const RunSettings& settings) {
  RunOutput out;
  out.settings = settings;
  if (is_matrix_method(settings.method)) {
    MatrixRunResult r = run_matrix(settings);
    out.series = std::move(r.series);
    out.pop_imag = std::move(r.population_imag);
    return out;
  }
  EnsembleResult r = run_ensemble(settings);
  out.series = r.to_series();
  out.pop_imag = std::move(r.pop_imag);
  out.hops_up = r.hops_up;
  out.hops_down = r.hops_down;
  out.n_aborted = r.n_aborted;
  return out;
}

std::vector<SummaryRow> compare(const SimConfig& config, std::span<const Method> methods,
                                const std::filesystem::path& out_dir, const std::string& prefix) {
  std::filesystem::create_directories(out_dir);
  std::vector<SummaryRow> rows;
  for (Method m : methods) {
    const RunSettings s = resolve(config, m);
    const RunOutput o = run(s);
    const auto path = out_dir / fmt::format("{}{}.csv", prefix, method_name(m));
    write_series(o.series, path.string());
    rows.push_back({prefix.empty() ? std::string(method_name(m)) : prefix.substr(0, prefix.size() - 1),
                    m, steady_state(o.series, s.drive.period()), path.filename().string()});
  }
  return rows;
}

void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SeriesFormatError(fmt::format("cannot open '{}' for writing", path.string()));
  out << "label,method,pop,pop_err,ekin,ekin_err,pop_slope,flat,csv\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.6g},{},{}\n", r.label,
                       method_name(r.method), r.steady.pop, r.steady.pop_err, r.steady.ekin,
                       r.steady.ekin_err, r.steady.pop_slope, r.steady.flat ? 1 : 0, r.csv);
  }
}

}  // namespace floquet_hop
