#pragma once

#include <vector>

namespace stn {

/// Ordered real-valued samples with an implicit unit time step.  Used for
/// orbits, generated neuron output and training targets alike.
using Series = std::vector<double>;

/// One input vector per time step.
using VectorSeries = std::vector<std::vector<double>>;

}  // namespace stn
