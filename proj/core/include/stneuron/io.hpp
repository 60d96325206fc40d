#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "stneuron/activation.hpp"
#include "stneuron/chaos.hpp"
#include "stneuron/diagnostics.hpp"
#include "stneuron/neuron.hpp"

namespace stn {

/// Full-precision decimal form: up to 17 significant digits with trailing
/// zeros trimmed — parses back to the identical double.
std::string format_double(double value);

/// Write-to-temp-then-rename so readers never observe a half-written file.
void atomic_write(const std::filesystem::path& path, std::string_view content);

// CSV renderings.  All doubles go through format_double.
std::string series_to_csv(std::span<const double> series);            // t,value
std::string orbit_to_csv(std::span<const double> samples);            // t,x
std::string scan_to_csv(std::span<const BifurcationPoint> points);    // r,x
std::string sweep_to_csv(std::span<const SigmaSweepRow> rows);        // delta_phi,sigma

/// Parses a t,value CSV produced by series_to_csv (or hand-written in the
/// same shape).  Throws std::invalid_argument with a line number on malformed
/// input.
Series series_from_csv(std::string_view content);
Series load_series_csv(const std::filesystem::path& path);
void save_series_csv(const std::filesystem::path& path,
                     std::span<const double> series);

// JSON codecs.  Parsers reject unknown keys and out-of-range values with
// std::invalid_argument / std::domain_error.
std::string driver_to_json(const DriverConfig& config);
DriverConfig driver_from_json(std::string_view text);

std::string model_to_json(const SpatioTemporalNeuron& neuron);
SpatioTemporalNeuron model_from_json(std::string_view text);
SpatioTemporalNeuron load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path,
                const SpatioTemporalNeuron& neuron);

std::string report_to_json(const DiagnosticsReport& report);
DiagnosticsReport report_from_json(std::string_view text);
void save_report(const std::filesystem::path& path,
                 const DiagnosticsReport& report);

}  // namespace stn
