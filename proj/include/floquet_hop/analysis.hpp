#pragma once

// Post-processing of time series: steady-state windows, spectra and
// oscillation amplitudes used by the comparison harness and the acceptance
// suite.

#include <vector>

#include "floquet_hop/types.hpp"

namespace floquet_hop {

struct Window {
  std::size_t begin = 0;  // first record index
  std::size_t end = 0;    // one past the last
  std::size_t size() const { return end - begin; }
};

/// Final `fraction` of the time grid. With period > 0 the window is shrunk
/// from the front to a whole number of periods when it spans at least one.
Window tail_window(const TimeSeries& series, double fraction, double period = 0.0);

struct SteadyState {
  double pop = 0.0;
  double pop_err = 0.0;  // mean per-record standard error over the window
  double ekin = 0.0;
  double ekin_err = 0.0;
  double pop_slope = 0.0;  // least-squares dN/dt over the last 10% of the run
  bool flat = false;       // |pop_slope| < 1e-4
};

/// Means over tail_window(series, 0.2, period).
SteadyState steady_state(const TimeSeries& series, double period = 0.0);

/// Observable column selector.
enum class Column { Population, Kinetic };

std::vector<double> column(const TimeSeries& series, Column c, Window w);
std::vector<double> times(const TimeSeries& series, Window w);

/// Single-sided amplitude spectrum of the linearly detrended samples:
/// amplitude[k] at angular frequency 2 pi k / (n dt), k = 0 .. n/2.
struct Spectrum {
  std::vector<double> frequency;
  std::vector<double> amplitude;
  double resolution = 0.0;  // bin spacing in angular frequency
};
Spectrum amplitude_spectrum(const std::vector<double>& t, const std::vector<double>& y);

/// Bin index of the largest amplitude with k >= 1.
std::size_t dominant_bin(const Spectrum& s);

/// Amplitude of the component at angular frequency w (linear detrend first).
double amplitude_at(const std::vector<double>& t, const std::vector<double>& y, double w);

/// Peak-to-trough of the cycle-averaged profile: samples folded by phase
/// t mod period into n_bins bins, averaged per bin.
double folded_peak_to_trough(const std::vector<double>& t, const std::vector<double>& y,
                             double period, int n_bins = 24);

/// max_k |a[k] - b[k]| over records with matching times. Throws when the
/// time grids differ.
double max_deviation(const TimeSeries& a, const TimeSeries& b, Column c);

/// |a - b| <= n_sigma * sqrt(err_a^2 + err_b^2), with a floor on the
/// combined error for deterministic (zero-error) pairs.
bool agree(double a, double err_a, double b, double err_b, double n_sigma, double floor);

}  // namespace floquet_hop
