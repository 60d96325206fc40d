#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stneuron/errors.hpp"
#include "stneuron/series.hpp"

namespace stn {

enum class MapKind { logistic, cubic };

const char* to_string(MapKind kind) noexcept;

/// One-dimensional iterated map with growth parameter r.
///
///   logistic: f(x) = r x (1 - x)  on [0, 1],  0 < r <= 4
///   cubic:    f(x) = r x - x^3,               0 < r <= 3
class ChaoticMap {
public:
    /// Throws std::domain_error when r is outside the valid range for kind.
    ChaoticMap(MapKind kind, double r);

    MapKind kind() const noexcept { return kind_; }
    double r() const noexcept { return r_; }

private:
    MapKind kind_;
    double r_;
};

/// One application of the map.  For the logistic map x must lie in [0, 1]
/// (its iterates then stay there); throws std::domain_error otherwise.
double map_step(const ChaoticMap& map, double x);

/// Analytic derivative f'(x): r(1 - 2x) for logistic, r - 3x^2 for cubic.
double map_derivative(const ChaoticMap& map, double x);

/// Extent of the attractor actually visited by an orbit.
struct AttractorBounds {
    double alpha_min;
    double alpha_max;
};

struct Orbit {
    double x0;
    std::size_t burn_in;
    Series samples;  ///< samples[0] is the state after burn_in steps
};

inline constexpr std::size_t default_burn_in = 1000;
inline constexpr std::size_t default_orbit_length = 100000;
inline constexpr double default_x0 = 0.1;
inline constexpr double orbit_escape_limit = 1e6;

/// Iterates the map from x0, discards the first burn_in states and keeps the
/// next n.  Throws numerical_error if any iterate escapes beyond
/// orbit_escape_limit in magnitude.
Orbit iterate_map(const ChaoticMap& map, double x0, std::size_t burn_in,
                  std::size_t n);

/// Min and max of the retained orbit samples.
AttractorBounds estimate_alpha_bounds(const ChaoticMap& map, double x0,
                                      std::size_t burn_in, std::size_t n);

struct BifurcationPoint {
    double r;
    double x;
};

/// samples_per_r post-transient states for each r on the inclusive uniform
/// grid of r_steps points spanning [r_min, r_max]; rows ordered by r.
std::vector<BifurcationPoint> bifurcation_scan(MapKind kind, double r_min,
                                               double r_max, std::size_t r_steps,
                                               double x0, std::size_t burn_in,
                                               std::size_t samples_per_r);

/// Largest Lyapunov exponent estimate: the mean of ln|f'(x_i)| over the
/// samples.  Throws numerical_error (naming the sample index) when the
/// derivative vanishes at some sample.
double lyapunov_exponent(std::span<const double> samples, const ChaoticMap& map);

}  // namespace stn
