#pragma once

#include <cstddef>

#include "stneuron/chaos.hpp"
#include "stneuron/series.hpp"

namespace stn {

/// Target range for the sigmoid steepness parameter.
struct PhiBounds {
    double phi_min;
    double phi_max;
};

/// phi(alpha) = phi0 + k * alpha — the affine form of normalize_phi.
struct TemporalAffine {
    double phi0;
    double k;
};

inline constexpr double degenerate_bounds_eps = 1e-12;

/// Maps alpha from [alpha_min, alpha_max] linearly onto [phi_min, phi_max].
/// alpha outside the attractor bounds is clamped to the nearest edge, so the
/// result always lies in [phi_min, phi_max], hitting the endpoints exactly.
/// Throws numerical_error when alpha_max - alpha_min < degenerate_bounds_eps.
double normalize_phi(double alpha, const AttractorBounds& bounds,
                     const PhiBounds& phi);

/// The slope/intercept equivalent of normalize_phi over the same bounds.
TemporalAffine to_affine(const AttractorBounds& bounds, const PhiBounds& phi);

/// Sigmoid with steepness phi: 1 / (1 + exp(-phi * z)).  Exactly 0.5 at
/// z = 0 or phi = 0; never overflows; the result is clamped to stay strictly
/// inside (0, 1) even when phi * z saturates the exponential.
double activation(double z, double phi);

/// dS/dz = phi * S * (1 - S), computed as phi * e / (1 + e)^2 with
/// e = exp(-|phi z|) so it underflows gracefully instead of overflowing.
double activation_derivative(double z, double phi);

/// Everything needed to regenerate a phi(t) sequence from scratch.
struct DriverConfig {
    ChaoticMap map;
    double alpha0 = default_x0;
    AttractorBounds bounds;
    PhiBounds phi;
};

/// Stateful phi(t) source.  Construction burns in the chaotic state; each
/// step() advances it once and returns the normalized steepness.  Two drivers
/// built from the same config emit identical sequences.
class TemporalDriver {
public:
    explicit TemporalDriver(const DriverConfig& config,
                            std::size_t burn_in = default_burn_in);

    /// Advance alpha by one map step and return normalize_phi of the new alpha.
    double step();

    double alpha() const noexcept { return alpha_; }
    const DriverConfig& config() const noexcept { return config_; }

    /// How many emitted alphas fell outside the configured bounds (clamped).
    std::size_t clamp_count() const noexcept { return clamps_; }

private:
    DriverConfig config_;
    double alpha_;
    std::size_t clamps_ = 0;
};

/// The first n values a fresh TemporalDriver over config would emit.
Series phi_sequence(const DriverConfig& config, std::size_t n,
                    std::size_t burn_in = default_burn_in);

}  // namespace stn
