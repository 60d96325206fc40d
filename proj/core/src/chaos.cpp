#include "stneuron/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stn {

namespace {

double upper_r(MapKind kind) noexcept {
    return kind == MapKind::logistic ? 4.0 : 3.0;
}

[[noreturn]] void throw_escape(const ChaoticMap& map, std::size_t step) {
    throw numerical_error("orbit escaped: |x| > 1e6 at step " +
                          std::to_string(step) + " (" +
                          std::string(to_string(map.kind())) +
                          " map, r=" + std::to_string(map.r()) + ")");
}

}  // namespace

const char* to_string(MapKind kind) noexcept {
    return kind == MapKind::logistic ? "logistic" : "cubic";
}

ChaoticMap::ChaoticMap(MapKind kind, double r) : kind_(kind), r_(r) {
    if (!std::isfinite(r) || r <= 0.0 || r > upper_r(kind)) {
        throw std::domain_error(std::string(to_string(kind)) +
                                " map requires r in (0, " +
                                std::to_string(upper_r(kind)) + "], got r=" +
                                std::to_string(r));
    }
}

double map_step(const ChaoticMap& map, double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("map_step: x must be finite");
    }
    if (map.kind() == MapKind::logistic) {
        if (x < 0.0 || x > 1.0) {
            throw std::domain_error(
                "logistic map is defined on [0, 1], got x=" + std::to_string(x));
        }
        return map.r() * x * (1.0 - x);
    }
    return map.r() * x - x * x * x;
}

double map_derivative(const ChaoticMap& map, double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("map_derivative: x must be finite");
    }
    if (map.kind() == MapKind::logistic) {
        return map.r() * (1.0 - 2.0 * x);
    }
    return map.r() - 3.0 * x * x;
}

Orbit iterate_map(const ChaoticMap& map, double x0, std::size_t burn_in,
                  std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("iterate_map: n must be at least 1");
    }
    double x = x0;
    for (std::size_t i = 0; i < burn_in; ++i) {
        x = map_step(map, x);
        if (std::abs(x) > orbit_escape_limit) throw_escape(map, i + 1);
    }
    Orbit orbit{x0, burn_in, Series()};
    orbit.samples.reserve(n);
    // record-then-advance: with burn_in = 0 the seed itself is sample 0
    for (std::size_t i = 0; i < n; ++i) {
        orbit.samples.push_back(x);
        if (i + 1 < n) {
            x = map_step(map, x);
            if (std::abs(x) > orbit_escape_limit) {
                throw_escape(map, burn_in + i + 1);
            }
        }
    }
    return orbit;
}

AttractorBounds estimate_alpha_bounds(const ChaoticMap& map, double x0,
                                      std::size_t burn_in, std::size_t n) {
    const Orbit orbit = iterate_map(map, x0, burn_in, n);
    const auto [lo, hi] =
        std::minmax_element(orbit.samples.begin(), orbit.samples.end());
    return {*lo, *hi};
}

std::vector<BifurcationPoint> bifurcation_scan(MapKind kind, double r_min,
                                               double r_max, std::size_t r_steps,
                                               double x0, std::size_t burn_in,
                                               std::size_t samples_per_r) {
    if (r_steps < 2) {
        throw std::invalid_argument("bifurcation_scan: r_steps must be >= 2");
    }
    if (samples_per_r == 0) {
        throw std::invalid_argument(
            "bifurcation_scan: samples_per_r must be >= 1");
    }
    if (!(r_min < r_max)) {
        throw std::invalid_argument("bifurcation_scan: need r_min < r_max");
    }
    if (!std::isfinite(r_min) || r_min <= 0.0 || r_max > upper_r(kind)) {
        throw std::domain_error(std::string(to_string(kind)) +
                                " map: r grid must stay inside (0, " +
                                std::to_string(upper_r(kind)) + "]");
    }

    std::vector<BifurcationPoint> points;
    points.reserve(r_steps * samples_per_r);
    const double dr = (r_max - r_min) / static_cast<double>(r_steps - 1);
    for (std::size_t i = 0; i < r_steps; ++i) {
        const double r = i + 1 == r_steps ? r_max : r_min + dr * i;
        const ChaoticMap map(kind, r);
        const Orbit orbit = iterate_map(map, x0, burn_in, samples_per_r);
        for (double x : orbit.samples) points.push_back({r, x});
    }
    return points;
}

double lyapunov_exponent(std::span<const double> samples,
                         const ChaoticMap& map) {
    if (samples.empty()) {
        throw std::invalid_argument("lyapunov_exponent: empty sample span");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double d = map_derivative(map, samples[i]);
        if (std::abs(d) < 1e-300) {
            throw numerical_error(
                "lyapunov_exponent: map derivative vanishes at sample index " +
                std::to_string(i) + "; ln|f'| is undefined there");
        }
        sum += std::log(std::abs(d));
    }
    return sum / static_cast<double>(samples.size());
}

}  // namespace stn
