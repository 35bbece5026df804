#include "floquet_hop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace floquet_hop {

namespace {

// Least-squares line through (t, y); returns {intercept, slope}.
std::pair<double, double> fit_line(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    st += t[k];
    sy += y[k];
  }
  const double tm = st / n;
  const double ym = sy / n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    stt += (t[k] - tm) * (t[k] - tm);
    sty += (t[k] - tm) * (y[k] - ym);
  }
  const double slope = stt > 0.0 ? sty / stt : 0.0;
  return {ym - slope * tm, slope};
}

std::vector<double> detrended(const std::vector<double>& t, const std::vector<double>& y) {
  const auto [a, b] = fit_line(t, y);
  std::vector<double> out(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) out[k] = y[k] - (a + b * t[k]);
  return out;
}

}  // namespace

Window tail_window(const TimeSeries& series, double fraction, double period) {
  const std::size_t n = series.size();
  if (n == 0) return {};
  auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  count = std::clamp<std::size_t>(count, 1, n);
  Window w{n - count, n};
  if (period > 0.0 && count > 1) {
    const double dt = series[1].t - series[0].t;
    const double span = dt * static_cast<double>(count);
    const double whole = std::floor(span / period + 1e-9);
    if (whole >= 1.0) {
      const auto keep = static_cast<std::size_t>(std::llround(whole * period / dt));
      if (keep >= 1 && keep <= count) w.begin = n - keep;
    }
  }
  return w;
}

SteadyState steady_state(const TimeSeries& series, double period) {
  SteadyState s;
  const Window w = tail_window(series, 0.2, period);
  if (w.size() == 0) return s;
  for (std::size_t k = w.begin; k < w.end; ++k) {
    s.pop += series[k].pop;
    s.pop_err += series[k].pop_err;
    s.ekin += series[k].ekin;
    s.ekin_err += series[k].ekin_err;
  }
  const double n = static_cast<double>(w.size());
  s.pop /= n;
  s.pop_err /= n;
  s.ekin /= n;
  s.ekin_err /= n;

  const Window last = tail_window(series, 0.1);
  if (last.size() >= 2) {
    s.pop_slope = fit_line(times(series, last), column(series, Column::Population, last)).second;
  }
  s.flat = std::abs(s.pop_slope) < 1e-4;
  return s;
}

std::vector<double> column(const TimeSeries& series, Column c, Window w) {
  std::vector<double> out;
  out.reserve(w.size());
  for (std::size_t k = w.begin; k < w.end; ++k) {
    out.push_back(c == Column::Population ? series[k].pop : series[k].ekin);
  }
  return out;
}

std::vector<double> times(const TimeSeries& series, Window w) {
  std::vector<double> out;
  out.reserve(w.size());
  for (std::size_t k = w.begin; k < w.end; ++k) out.push_back(series[k].t);
  return out;
}

Spectrum amplitude_spectrum(const std::vector<double>& t, const std::vector<double>& y) {
  Spectrum s;
  const std::size_t n = y.size();
  if (n < 4) return s;
  const double dt = t[1] - t[0];
  const std::vector<double> d = detrended(t, y);
  s.resolution = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc{0.0, 0.0};
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) acc += d[j] * std::polar(1.0, phase * static_cast<double>(j));
    s.frequency.push_back(s.resolution * static_cast<double>(k));
    s.amplitude.push_back((k == 0 ? 1.0 : 2.0) * std::abs(acc) / static_cast<double>(n));
  }
  return s;
}

std::size_t dominant_bin(const Spectrum& s) {
  std::size_t best = 1;
  for (std::size_t k = 1; k < s.amplitude.size(); ++k) {
    if (s.amplitude[k] > s.amplitude[best]) best = k;
  }
  return best;
}

double amplitude_at(const std::vector<double>& t, const std::vector<double>& y, double w) {
  if (y.empty()) return 0.0;
  const std::vector<double> d = detrended(t, y);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < d.size(); ++j) acc += d[j] * std::polar(1.0, -w * t[j]);
  return 2.0 * std::abs(acc) / static_cast<double>(d.size());
}

double folded_peak_to_trough(const std::vector<double>& t, const std::vector<double>& y,
                             double period, int n_bins) {
  if (y.empty() || !(period > 0.0) || n_bins < 2) return 0.0;
  const std::vector<double> d = detrended(t, y);
  std::vector<double> sum(static_cast<std::size_t>(n_bins), 0.0);
  std::vector<int> count(static_cast<std::size_t>(n_bins), 0);
  for (std::size_t j = 0; j < d.size(); ++j) {
    double phase = std::fmod(t[j], period) / period;
    if (phase < 0.0) phase += 1.0;
    const auto bin = std::min(n_bins - 1, static_cast<int>(phase * n_bins));
    sum[bin] += d[j];
    ++count[bin];
  }
  double lo = INFINITY, hi = -INFINITY;
  for (int b = 0; b < n_bins; ++b) {
    if (count[b] == 0) continue;
    const double m = sum[b] / count[b];
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return std::isfinite(lo) ? hi - lo : 0.0;
}

double max_deviation(const TimeSeries& a, const TimeSeries& b, Column c) {
  if (a.size() != b.size()) throw std::invalid_argument("max_deviation: time grids differ in length");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].t - b[k].t) > 1e-9 * std::max(1.0, std::abs(a[k].t))) {
      throw std::invalid_argument("max_deviation: time grids differ");
    }
    const double va = c == Column::Population ? a[k].pop : a[k].ekin;
    const double vb = c == Column::Population ? b[k].pop : b[k].ekin;
    worst = std::max(worst, std::abs(va - vb));
  }
  return worst;
}

bool agree(double a, double err_a, double b, double err_b, double n_sigma, double floor) {
  const double combined = std::max(std::sqrt(err_a * err_a + err_b * err_b), floor / n_sigma);
  return std::abs(a - b) <= n_sigma * combined;
}

}  // namespace floquet_hop
