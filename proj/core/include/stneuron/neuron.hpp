#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stneuron/activation.hpp"
#include "stneuron/series.hpp"

namespace stn {

/// Single neuron whose sigmoid steepness is driven by a chaotic map:
/// out_t = S(w . x_t + b, phi_t).
struct SpatioTemporalNeuron {
    std::vector<double> weights;
    double bias = 0.0;
    DriverConfig driver_config;
};

struct TrainConfig {
    double learning_rate = 0.5;
    std::size_t max_epochs = 20000;
    double mse_tolerance = 1e-9;
    bool train_bias = true;
};

struct TrainReport {
    double final_mse = 0.0;        ///< last loss_curve entry
    std::size_t epochs_run = 0;    ///< == loss_curve.size()
    Series loss_curve;             ///< MSE at the start of each epoch
    std::size_t targets_outside_unit = 0;  ///< targets not in [0, 1]
};

/// Applies the neuron to a sequence of input vectors.  Each call constructs a
/// fresh driver, so identical inputs always produce identical output.
Series forward(const SpatioTemporalNeuron& neuron, const VectorSeries& inputs);

/// Mean squared error between two equally long, non-empty series.
double mse_loss(std::span<const double> output, std::span<const double> target);

/// Full-batch gradient descent on the MSE.  Every epoch replays the identical
/// phi sequence (the driver is rebuilt from the stored config), evaluates the
/// loss, records it, stops if it is within mse_tolerance, and otherwise
/// updates the weights (and bias, when train_bias) by the mean gradient.
/// Throws divergence_error if the loss turns non-finite.
std::pair<SpatioTemporalNeuron, TrainReport> train(
    const SpatioTemporalNeuron& neuron, const VectorSeries& inputs,
    std::span<const double> target, const TrainConfig& config);

/// forward() on n copies of the one-element input [flat_value]: the output is
/// then shaped purely by the phi(t) sequence.
Series generate(const SpatioTemporalNeuron& neuron, double flat_value,
                std::size_t n);

}  // namespace stn
