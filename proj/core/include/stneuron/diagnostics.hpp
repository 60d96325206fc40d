#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stneuron/activation.hpp"
#include "stneuron/chaos.hpp"

namespace stn {

inline constexpr std::size_t default_max_lag = 50;

/// Mean of a non-empty series.
double mean(std::span<const double> series);

/// Population standard deviation (divide by n), two-pass.  Needs n >= 2.
double std_dev(std::span<const double> series);

/// Normalized autocorrelation for lags 0..max_lag (biased divide-by-n
/// estimator); element 0 is exactly 1.  Requires max_lag >= 1, a series
/// longer than max_lag, and variance above 1e-24.
std::vector<double> autocorrelation(std::span<const double> series,
                                    std::size_t max_lag);

struct DiagnosticsReport {
    std::optional<double> lyapunov;  ///< present only when a map was supplied
    double std_dev = 0.0;
    double mean = 0.0;
    std::vector<double> autocorrelation;  ///< lags 0..max_lag
    std::size_t n_samples = 0;
};

/// Summary statistics of a series; the Lyapunov estimate is included when the
/// map that (supposedly) generated it is given.
DiagnosticsReport diagnose(std::span<const double> series,
                           const std::optional<ChaoticMap>& map,
                           std::size_t max_lag = default_max_lag);

struct SigmaSweepRow {
    double delta_phi;
    double phi_center;
    double sigma;
};

/// For each delta, centers the phi range on phi_center with width delta,
/// runs a fresh w = {1}, b = 0 neuron on a flat input and records the
/// standard deviation of the n output samples.  Rows come back sorted by
/// delta.  Each delta must be positive; n must be at least 1000.
std::vector<SigmaSweepRow> sigma_sweep(double phi_center,
                                       std::span<const double> deltas,
                                       const DriverConfig& driver_template,
                                       double flat_value, std::size_t n);

}  // namespace stn
