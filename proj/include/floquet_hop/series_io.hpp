#pragma once

// CSV time-series contract shared by every method:
//   t,pop,pop_err,ekin,ekin_err,trace_defect,herm_defect
// 12 significant digits, '.' decimal point, '\n' line endings, t strictly
// increasing.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "floquet_hop/types.hpp"

namespace floquet_hop {

inline constexpr std::string_view kSeriesHeader =
    "t,pop,pop_err,ekin,ekin_err,trace_defect,herm_defect";

class SeriesFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws SeriesFormatError if t is not strictly increasing or a value is non-finite.
void validate_series(const TimeSeries& records);

void write_series(const TimeSeries& records, std::ostream& out);
void write_series(const TimeSeries& records, const std::string& path);

/// Parses and validates; errors name the offending line.
TimeSeries read_series(std::istream& in);
TimeSeries read_series(const std::string& path);

}  // namespace floquet_hop
