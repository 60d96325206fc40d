#include "stneuron/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace stn {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string(what) +
                                    ": invalid JSON: " + e.what());
    }
}

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const char* what) {
    if (!j.is_object()) {
        throw std::invalid_argument(std::string(what) +
                                    ": expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : keys) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument(std::string(what) + ": unknown key \"" +
                                        key + "\"");
        }
    }
    for (const char* k : keys) {
        if (!j.contains(k)) {
            throw std::invalid_argument(std::string(what) + ": missing key \"" +
                                        std::string(k) + "\"");
        }
    }
}

double get_number(const json& j, const char* key, const char* what) {
    if (!j.contains(key)) {
        throw std::invalid_argument(std::string(what) + ": missing key \"" +
                                    std::string(key) + "\"");
    }
    const json& v = j[key];
    if (!v.is_number()) {
        throw std::invalid_argument(std::string(what) + ": \"" + key +
                                    "\" must be a number");
    }
    return v.get<double>();
}

MapKind kind_from_string(const std::string& s, const char* what) {
    if (s == "logistic") return MapKind::logistic;
    if (s == "cubic") return MapKind::cubic;
    throw std::invalid_argument(std::string(what) + ": map kind must be "
                                "\"logistic\" or \"cubic\", got \"" + s + "\"");
}

json driver_json(const DriverConfig& config) {
    return json{
        {"map",
         {{"kind", to_string(config.map.kind())}, {"r", config.map.r()}}},
        {"alpha0", config.alpha0},
        {"alpha_min", config.bounds.alpha_min},
        {"alpha_max", config.bounds.alpha_max},
        {"phi_min", config.phi.phi_min},
        {"phi_max", config.phi.phi_max},
    };
}

DriverConfig driver_from(const json& j, const char* what) {
    require_keys(j, {"map", "alpha0", "alpha_min", "alpha_max", "phi_min",
                     "phi_max"}, what);
    const json& m = j.at("map");
    require_keys(m, {"kind", "r"}, what);
    if (!m.at("kind").is_string()) {
        throw std::invalid_argument(std::string(what) +
                                    ": map \"kind\" must be a string");
    }
    const MapKind kind = kind_from_string(m.at("kind").get<std::string>(), what);
    // ChaoticMap validates r; std::domain_error propagates to the caller
    const ChaoticMap map(kind, get_number(m, "r", what));
    return DriverConfig{
        map,
        get_number(j, "alpha0", what),
        {get_number(j, "alpha_min", what), get_number(j, "alpha_max", what)},
        {get_number(j, "phi_min", what), get_number(j, "phi_max", what)}};
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 40> buf;
    const auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value,
                      std::chars_format::general, 17);
    return std::string(buf.data(), end);
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open " + tmp.string() +
                                     " for writing");
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string indexed_csv(const char* header, std::span<const double> values) {
    std::string out(header);
    out += '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    return out;
}

}  // namespace

std::string series_to_csv(std::span<const double> series) {
    return indexed_csv("t,value", series);
}

std::string orbit_to_csv(std::span<const double> samples) {
    return indexed_csv("t,x", samples);
}

std::string scan_to_csv(std::span<const BifurcationPoint> points) {
    std::string out = "r,x\n";
    for (const auto& p : points) {
        out += format_double(p.r);
        out += ',';
        out += format_double(p.x);
        out += '\n';
    }
    return out;
}

std::string sweep_to_csv(std::span<const SigmaSweepRow> rows) {
    std::string out = "delta_phi,sigma\n";
    for (const auto& row : rows) {
        out += format_double(row.delta_phi);
        out += ',';
        out += format_double(row.sigma);
        out += '\n';
    }
    return out;
}

Series series_from_csv(std::string_view content) {
    Series values;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t nl = content.find('\n', pos);
        std::string_view line = content.substr(
            pos, nl == std::string_view::npos ? content.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (line_no == 1) {
            if (line != "t,value") {
                throw std::invalid_argument(
                    "series CSV: expected header \"t,value\", got \"" +
                    std::string(line) + "\"");
            }
            continue;
        }
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos) {
            throw std::invalid_argument("series CSV: line " +
                                        std::to_string(line_no) +
                                        " has no comma");
        }
        const std::string_view field = line.substr(comma + 1);
        double v = 0.0;
        const auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
            throw std::invalid_argument(
                "series CSV: line " + std::to_string(line_no) +
                ": cannot parse value \"" + std::string(field) + "\"");
        }
        values.push_back(v);
    }
    return values;
}

Series load_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open " + path.string());
    }
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return series_from_csv(content);
}

void save_series_csv(const std::filesystem::path& path,
                     std::span<const double> series) {
    atomic_write(path, series_to_csv(series));
}

std::string driver_to_json(const DriverConfig& config) {
    return driver_json(config).dump(2) + "\n";
}

DriverConfig driver_from_json(std::string_view text) {
    return driver_from(parse_json(text, "driver"), "driver");
}

std::string model_to_json(const SpatioTemporalNeuron& neuron) {
    const json j{{"weights", neuron.weights},
                 {"bias", neuron.bias},
                 {"driver", driver_json(neuron.driver_config)}};
    return j.dump(2) + "\n";
}

SpatioTemporalNeuron model_from_json(std::string_view text) {
    const json j = parse_json(text, "model");
    require_keys(j, {"weights", "bias", "driver"}, "model");
    const json& w = j.at("weights");
    if (!w.is_array() || w.empty()) {
        throw std::invalid_argument(
            "model: \"weights\" must be a non-empty array");
    }
    std::vector<double> weights;
    weights.reserve(w.size());
    for (const json& v : w) {
        if (!v.is_number()) {
            throw std::invalid_argument("model: weights must be numbers");
        }
        weights.push_back(v.get<double>());
    }
    return SpatioTemporalNeuron{std::move(weights),
                                get_number(j, "bias", "model"),
                                driver_from(j.at("driver"), "model driver")};
}

SpatioTemporalNeuron load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open " + path.string());
    }
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return model_from_json(content);
}

void save_model(const std::filesystem::path& path,
                const SpatioTemporalNeuron& neuron) {
    atomic_write(path, model_to_json(neuron));
}

std::string report_to_json(const DiagnosticsReport& report) {
    json j{{"std_dev", report.std_dev},
           {"mean", report.mean},
           {"autocorrelation", report.autocorrelation},
           {"n_samples", report.n_samples}};
    if (report.lyapunov.has_value()) {
        j["lyapunov"] = *report.lyapunov;
    }
    return j.dump(2) + "\n";
}

DiagnosticsReport report_from_json(std::string_view text) {
    const json j = parse_json(text, "report");
    if (!j.is_object()) {
        throw std::invalid_argument("report: expected a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "lyapunov" && key != "std_dev" && key != "mean" &&
            key != "autocorrelation" && key != "n_samples") {
            throw std::invalid_argument("report: unknown key \"" + key + "\"");
        }
    }
    DiagnosticsReport report;
    report.std_dev = get_number(j, "std_dev", "report");
    report.mean = get_number(j, "mean", "report");
    if (!j.contains("autocorrelation") || !j.at("autocorrelation").is_array()) {
        throw std::invalid_argument(
            "report: \"autocorrelation\" must be an array");
    }
    for (const json& v : j.at("autocorrelation")) {
        if (!v.is_number()) {
            throw std::invalid_argument(
                "report: autocorrelation entries must be numbers");
        }
        report.autocorrelation.push_back(v.get<double>());
    }
    if (!j.contains("n_samples") || !j.at("n_samples").is_number_unsigned()) {
        throw std::invalid_argument(
            "report: \"n_samples\" must be a non-negative integer");
    }
    report.n_samples = j.at("n_samples").get<std::size_t>();
    if (j.contains("lyapunov")) {
        report.lyapunov = get_number(j, "lyapunov", "report");
    }
    return report;
}

void save_report(const std::filesystem::path& path,
                 const DiagnosticsReport& report) {
    atomic_write(path, report_to_json(report));
}

}  // namespace stn
