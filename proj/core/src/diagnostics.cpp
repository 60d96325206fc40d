#include "stneuron/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stneuron/neuron.hpp"

namespace stn {

double mean(std::span<const double> series) {
    if (series.empty()) {
        throw std::invalid_argument("mean: empty series");
    }
    double sum = 0.0;
    for (double v : series) sum += v;
    return sum / static_cast<double>(series.size());
}

double std_dev(std::span<const double> series) {
    if (series.size() < 2) {
        throw std::invalid_argument("std_dev: need at least 2 samples");
    }
    const double m = mean(series);
    double sum = 0.0;
    for (double v : series) {
        const double d = v - m;
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(series.size()));
}

std::vector<double> autocorrelation(std::span<const double> series,
                                    std::size_t max_lag) {
    if (max_lag == 0) {
        throw std::invalid_argument("autocorrelation: max_lag must be >= 1");
    }
    if (series.size() <= max_lag) {
        throw std::invalid_argument(
            "autocorrelation: series length " + std::to_string(series.size()) +
            " must exceed max_lag " + std::to_string(max_lag));
    }
    const std::size_t n = series.size();
    const double m = mean(series);
    double denom = 0.0;
    for (double v : series) {
        const double d = v - m;
        denom += d * d;
    }
    if (denom / static_cast<double>(n) <= 1e-24) {
        throw numerical_error(
            "autocorrelation: series variance is (near) zero; correlation "
            "undefined");
    }
    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            num += (series[t] - m) * (series[t + k] - m);
        }
        rho[k] = num / denom;
    }
    return rho;
}

DiagnosticsReport diagnose(std::span<const double> series,
                           const std::optional<ChaoticMap>& map,
                           std::size_t max_lag) {
    DiagnosticsReport report;
    report.n_samples = series.size();

    // run every component so one bad metric doesn't hide the others
    std::vector<std::string> failures;
    bool numeric = false;
    const auto attempt = [&](auto&& fn) {
        try {
            fn();
        } catch (const numerical_error& e) {
            failures.emplace_back(e.what());
            numeric = true;
        } catch (const std::exception& e) {
            failures.emplace_back(e.what());
        }
    };
    attempt([&] { report.mean = mean(series); });
    attempt([&] { report.std_dev = std_dev(series); });
    attempt([&] { report.autocorrelation = autocorrelation(series, max_lag); });
    if (map.has_value()) {
        attempt([&] { report.lyapunov = lyapunov_exponent(series, *map); });
    }
    if (!failures.empty()) {
        std::string msg =
            failures.size() == 1 ? failures.front() : "diagnose: multiple failures: ";
        if (failures.size() > 1) {
            for (std::size_t i = 0; i < failures.size(); ++i) {
                msg += failures[i];
                if (i + 1 < failures.size()) msg += "; ";
            }
        }
        if (numeric) throw numerical_error(msg);
        throw std::invalid_argument(msg);
    }
    return report;
}

std::vector<SigmaSweepRow> sigma_sweep(double phi_center,
                                       std::span<const double> deltas,
                                       const DriverConfig& driver_template,
                                       double flat_value, std::size_t n) {
    if (!std::isfinite(phi_center)) {
        throw std::domain_error("sigma_sweep: phi_center must be finite");
    }
    if (deltas.empty()) {
        throw std::invalid_argument("sigma_sweep: no deltas given");
    }
    for (double d : deltas) {
        if (!std::isfinite(d) || d <= 0.0) {
            throw std::domain_error("sigma_sweep: every delta must be > 0, got " +
                                    std::to_string(d));
        }
    }
    if (n < 1000) {
        throw std::invalid_argument(
            "sigma_sweep: n must be at least 1000 for a stable deviation");
    }

    std::vector<double> sorted(deltas.begin(), deltas.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<SigmaSweepRow> rows;
    rows.reserve(sorted.size());
    for (double delta : sorted) {
        DriverConfig config = driver_template;
        config.phi = {phi_center - delta / 2.0, phi_center + delta / 2.0};
        const SpatioTemporalNeuron probe{{1.0}, 0.0, config};
        const Series out = generate(probe, flat_value, n);
        rows.push_back({delta, phi_center, std_dev(out)});
    }
    return rows;
}

}  // namespace stn
