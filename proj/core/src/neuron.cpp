#include "stneuron/neuron.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace stn {

namespace {

void check_shapes(const SpatioTemporalNeuron& neuron,
                  const VectorSeries& inputs) {
    if (neuron.weights.empty()) {
        throw std::invalid_argument("neuron has no weights");
    }
    for (double w : neuron.weights) {
        if (!std::isfinite(w)) {
            throw std::invalid_argument("neuron weights must be finite");
        }
    }
    if (!std::isfinite(neuron.bias)) {
        throw std::invalid_argument("neuron bias must be finite");
    }
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        if (inputs[t].size() != neuron.weights.size()) {
            throw std::invalid_argument(
                "input dimension mismatch at step " + std::to_string(t) +
                ": got " + std::to_string(inputs[t].size()) + ", weights have " +
                std::to_string(neuron.weights.size()));
        }
    }
}

double pre_activation(const SpatioTemporalNeuron& neuron,
                      const std::vector<double>& x) {
    return std::inner_product(neuron.weights.begin(), neuron.weights.end(),
                              x.begin(), neuron.bias);
}

std::uint64_t fnv1a_append(std::uint64_t h, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
    }
    return h;
}

constexpr std::uint64_t fnv_basis = 14695981039346656037ull;

}  // namespace

Series forward(const SpatioTemporalNeuron& neuron, const VectorSeries& inputs) {
    check_shapes(neuron, inputs);
    TemporalDriver driver(neuron.driver_config);
    Series out;
    out.reserve(inputs.size());
    for (const auto& x : inputs) {
        out.push_back(activation(pre_activation(neuron, x), driver.step()));
    }
    return out;
}

double mse_loss(std::span<const double> output, std::span<const double> target) {
    if (output.size() != target.size()) {
        throw std::invalid_argument("mse_loss: length mismatch (" +
                                    std::to_string(output.size()) + " vs " +
                                    std::to_string(target.size()) + ")");
    }
    if (output.empty()) {
        throw std::invalid_argument("mse_loss: empty series");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double d = output[i] - target[i];
        sum += d * d;
    }
    return sum / static_cast<double>(output.size());
}

std::pair<SpatioTemporalNeuron, TrainReport> train(
    const SpatioTemporalNeuron& neuron, const VectorSeries& inputs,
    std::span<const double> target, const TrainConfig& config) {
    check_shapes(neuron, inputs);
    if (inputs.size() != target.size()) {
        throw std::invalid_argument("train: inputs and target lengths differ");
    }
    if (inputs.empty()) {
        throw std::invalid_argument("train: need at least one sample");
    }
    if (!std::isfinite(config.learning_rate) || config.learning_rate < 0.0) {
        throw std::invalid_argument("train: learning_rate must be >= 0");
    }
    if (config.max_epochs == 0) {
        throw std::invalid_argument("train: max_epochs must be >= 1");
    }
    if (!std::isfinite(config.mse_tolerance) || config.mse_tolerance < 0.0) {
        throw std::invalid_argument("train: mse_tolerance must be >= 0");
    }

    const std::size_t n = target.size();
    const std::size_t dim = neuron.weights.size();

    SpatioTemporalNeuron current = neuron;
    TrainReport report;
    for (double y : target) {
        if (y < 0.0 || y > 1.0) ++report.targets_outside_unit;
    }

    std::uint64_t first_epoch_hash = 0;
    std::vector<double> grad_w(dim);
    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        TemporalDriver driver(current.driver_config);
        std::uint64_t phi_hash = fnv_basis;
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        double grad_b = 0.0;
        double loss = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const double phi = driver.step();
            phi_hash = fnv1a_append(phi_hash, phi);
            const double z = pre_activation(current, inputs[t]);
            const double s = activation(z, phi);
            const double diff = s - target[t];
            loss += diff * diff;
            const double g = 2.0 * diff * activation_derivative(z, phi);
            for (std::size_t j = 0; j < dim; ++j) grad_w[j] += g * inputs[t][j];
            grad_b += g;
        }
        loss /= static_cast<double>(n);

        // the phi sequence is a pure function of the stored config, so every
        // epoch must see the same one
        if (epoch == 0) {
            first_epoch_hash = phi_hash;
        } else if (phi_hash != first_epoch_hash) {
            throw std::logic_error("train: phi sequence changed between epochs");
        }

        if (!std::isfinite(loss)) {
            throw divergence_error(
                "train: loss became non-finite at epoch " + std::to_string(epoch),
                epoch);
        }
        report.loss_curve.push_back(loss);
        if (loss <= config.mse_tolerance) break;

        const double scale = config.learning_rate / static_cast<double>(n);
        for (std::size_t j = 0; j < dim; ++j) {
            current.weights[j] -= scale * grad_w[j];
        }
        if (config.train_bias) current.bias -= scale * grad_b;
    }

    report.epochs_run = report.loss_curve.size();
    report.final_mse = report.loss_curve.back();
    return {std::move(current), std::move(report)};
}

Series generate(const SpatioTemporalNeuron& neuron, double flat_value,
                std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("generate: n must be >= 1");
    }
    if (!std::isfinite(flat_value)) {
        throw std::invalid_argument("generate: flat_value must be finite");
    }
    if (neuron.weights.size() != 1) {
        throw std::invalid_argument(
            "generate: neuron must have exactly one weight, has " +
            std::to_string(neuron.weights.size()));
    }
    const VectorSeries inputs(n, std::vector<double>{flat_value});
    return forward(neuron, inputs);
}

}  // namespace stn
