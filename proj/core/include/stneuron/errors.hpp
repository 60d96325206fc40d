#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stn {

/// Numerical failure inside an otherwise well-formed computation:
/// orbit escape, vanishing map derivative under the log, degenerate
/// attractor bounds, zero-variance series.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Training loss became non-finite.  Carries the epoch at which it happened.
class divergence_error : public numerical_error {
public:
    divergence_error(const std::string& what, std::size_t epoch)
        : numerical_error(what), epoch_(epoch) {}

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

}  // namespace stn
