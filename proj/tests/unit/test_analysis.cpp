#include <doctest.h>

#include <cmath>
#include <numbers>

#include "floquet_hop/analysis.hpp"

using namespace floquet_hop;

namespace {

TimeSeries sine_series(double amp, double w, double t_final, double dt, double offset = 0.5) {
  TimeSeries s;
  const int n = static_cast<int>(std::lround(t_final / dt));
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    s.push_back({t, offset + amp * std::sin(w * t), 0.01, 1.0, 0.02, 0.0, 0.0});
  }
  return s;
}

}  // namespace

TEST_CASE("spectrum peaks at the oscillation frequency") {
  const double w = 0.2;
  const double period = 2.0 * std::numbers::pi / w;
  const TimeSeries s = sine_series(0.05, w, 500.0, 0.1);
  const Window win = tail_window(s, 0.4, period);
  CHECK(win.size() * 0.1 == doctest::Approx(std::floor(0.4 * 5001 * 0.1 / period) * period).epsilon(1e-3));
  const auto t = times(s, win);
  const auto y = column(s, Column::Population, win);
  const Spectrum sp = amplitude_spectrum(t, y);
  const std::size_t k = dominant_bin(sp);
  CHECK(std::abs(sp.frequency[k] - w) <= sp.resolution);
  CHECK(sp.amplitude[k] == doctest::Approx(0.05).epsilon(0.02));
  CHECK(amplitude_at(t, y, w) == doctest::Approx(0.05).epsilon(0.02));
  CHECK(folded_peak_to_trough(t, y, period) == doctest::Approx(0.1).epsilon(0.02));
}

TEST_CASE("steady state of a constant series") {
  const TimeSeries s = sine_series(0.0, 1.0, 50.0, 0.1, 0.88);
  const SteadyState ss = steady_state(s);
  CHECK(ss.pop == doctest::Approx(0.88));
  CHECK(ss.ekin == doctest::Approx(1.0));
  CHECK(ss.pop_err == doctest::Approx(0.01));
  CHECK(ss.flat);
  CHECK(max_deviation(s, s, Column::Population) == 0.0);

  TimeSeries drift = s;
  for (auto& r : drift) r.pop += 1e-3 * r.t;
  CHECK_FALSE(steady_state(drift).flat);
  CHECK(max_deviation(s, drift, Column::Population) == doctest::Approx(0.05));
}

TEST_CASE("agreement test") {
  CHECK(agree(0.88, 0.003, 0.89, 0.003, 3.0, 0.0));
  CHECK_FALSE(agree(0.88, 0.001, 0.89, 0.001, 3.0, 0.0));
  CHECK(agree(0.880, 0.0, 0.884, 0.0, 3.0, 0.005));
  CHECK_FALSE(agree(0.880, 0.0, 0.886, 0.0, 3.0, 0.005));
}
