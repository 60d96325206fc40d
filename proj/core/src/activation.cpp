#include "stneuron/activation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace stn {

namespace {

void check_bounds(const AttractorBounds& bounds) {
    if (!std::isfinite(bounds.alpha_min) || !std::isfinite(bounds.alpha_max)) {
        throw std::domain_error("attractor bounds must be finite");
    }
    const double span = bounds.alpha_max - bounds.alpha_min;
    if (span < degenerate_bounds_eps) {
        throw numerical_error(
            "degenerate attractor bounds: alpha_max - alpha_min = " +
            std::to_string(span) + " (< 1e-12); cannot normalize");
    }
}

void check_phi(const PhiBounds& phi) {
    if (!std::isfinite(phi.phi_min) || !std::isfinite(phi.phi_max) ||
        phi.phi_min > phi.phi_max) {
        throw std::domain_error("phi bounds must be finite with phi_min <= phi_max");
    }
}

}  // namespace

double normalize_phi(double alpha, const AttractorBounds& bounds,
                     const PhiBounds& phi) {
    if (!std::isfinite(alpha)) {
        throw std::domain_error("normalize_phi: alpha must be finite");
    }
    check_bounds(bounds);
    check_phi(phi);
    const double t = std::clamp(
        (alpha - bounds.alpha_min) / (bounds.alpha_max - bounds.alpha_min), 0.0,
        1.0);
    // lerp keeps the result inside [phi_min, phi_max] and is endpoint-exact
    return std::lerp(phi.phi_min, phi.phi_max, t);
}

TemporalAffine to_affine(const AttractorBounds& bounds, const PhiBounds& phi) {
    check_bounds(bounds);
    check_phi(phi);
    const double k =
        (phi.phi_max - phi.phi_min) / (bounds.alpha_max - bounds.alpha_min);
    return {phi.phi_min - k * bounds.alpha_min, k};
}

double activation(double z, double phi) {
    const double t = phi * z;
    double s;
    if (t >= 0.0) {
        s = 1.0 / (1.0 + std::exp(-t));
    } else {
        const double e = std::exp(t);
        s = e / (1.0 + e);
    }
    // keep the output strictly inside (0, 1) even in saturation
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    constexpr double hi = 0x1.fffffffffffffp-1;  // largest double below 1
    return std::clamp(s, lo, hi);
}

double activation_derivative(double z, double phi) {
    const double e = std::exp(-std::abs(phi * z));  // s(1-s) is even in phi*z
    const double d = 1.0 + e;
    return phi * (e / (d * d));
}

TemporalDriver::TemporalDriver(const DriverConfig& config, std::size_t burn_in)
    : config_(config), alpha_(config.alpha0) {
    if (!std::isfinite(alpha_)) {
        throw std::domain_error("TemporalDriver: alpha0 must be finite");
    }
    if (config_.map.kind() == MapKind::logistic &&
        (alpha_ < 0.0 || alpha_ > 1.0)) {
        throw std::domain_error(
            "TemporalDriver: alpha0 must lie in [0, 1] for the logistic map");
    }
    check_bounds(config_.bounds);
    check_phi(config_.phi);
    for (std::size_t i = 0; i < burn_in; ++i) {
        alpha_ = map_step(config_.map, alpha_);
        if (std::abs(alpha_) > orbit_escape_limit) {
            throw numerical_error(
                "TemporalDriver: alpha escaped |x| > 1e6 during burn-in at step " +
                std::to_string(i + 1));
        }
    }
}

double TemporalDriver::step() {
    alpha_ = map_step(config_.map, alpha_);
    if (std::abs(alpha_) > orbit_escape_limit) {
        throw numerical_error("TemporalDriver: alpha escaped |x| > 1e6");
    }
    if (alpha_ < config_.bounds.alpha_min || alpha_ > config_.bounds.alpha_max) {
        ++clamps_;
    }
    return normalize_phi(alpha_, config_.bounds, config_.phi);
}

Series phi_sequence(const DriverConfig& config, std::size_t n,
                    std::size_t burn_in) {
    TemporalDriver driver(config, burn_in);
    Series out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(driver.step());
    return out;
}

}  // namespace stn
