#include "floquet_hop/series_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace floquet_hop {

void validate_series(const TimeSeries& records) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& r = records[k];
    for (double v : {r.t, r.pop, r.pop_err, r.ekin, r.ekin_err, r.trace_defect, r.herm_defect}) {
      if (!std::isfinite(v)) throw SeriesFormatError(fmt::format("record {}: non-finite value", k));
    }
    if (k > 0 && !(r.t > records[k - 1].t)) {
      throw SeriesFormatError(fmt::format("record {}: t = {} not after {}", k, r.t, records[k - 1].t));
    }
  }
}

void write_series(const TimeSeries& records, std::ostream& out) {
  validate_series(records);
  out << kSeriesHeader << '\n';
  for (const auto& r : records) {
    out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", r.t, r.pop,
                       r.pop_err, r.ekin, r.ekin_err, r.trace_defect, r.herm_defect);
  }
}

void write_series(const TimeSeries& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SeriesFormatError(fmt::format("cannot open '{}' for writing", path));
  write_series(records, out);
  if (!out) throw SeriesFormatError(fmt::format("write to '{}' failed", path));
}

TimeSeries read_series(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SeriesFormatError("line 1: missing header");
  if (line != kSeriesHeader) throw SeriesFormatError(fmt::format("line 1: unexpected header '{}'", line));

  TimeSeries out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<double, 7> v{};
    std::size_t pos = 0;
    for (std::size_t col = 0; col < v.size(); ++col) {
      const std::size_t end = col + 1 < v.size() ? line.find(',', pos) : line.size();
      if (end == std::string::npos) {
        throw SeriesFormatError(fmt::format("line {}: expected 7 fields", lineno));
      }
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      const auto [ptr, ec] = std::from_chars(first, last, v[col]);
      if (ec != std::errc() || ptr != last || !std::isfinite(v[col])) {
        throw SeriesFormatError(fmt::format("line {}: field {} is not a finite number", lineno, col + 1));
      }
      pos = end + 1;
    }
    TimeSeriesRecord r{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
    if (!out.empty() && !(r.t > out.back().t)) {
      throw SeriesFormatError(fmt::format("line {}: t = {} is not strictly increasing", lineno, r.t));
    }
    out.push_back(r);
  }
  return out;
}

TimeSeries read_series(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SeriesFormatError(fmt::format("cannot open '{}'", path));
  return read_series(in);
}

}  // namespace floquet_hop
