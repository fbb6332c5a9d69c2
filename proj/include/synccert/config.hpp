#pragma once

#include "synccert/diagnostics.hpp"
#include "synccert/dynamics.hpp"
#include "synccert/error.hpp"
#include "synccert/network.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace synccert {

/// Raised for malformed or semantically invalid configuration text. The message carries
/// either the line number (syntax) or the field path (semantics).
class ConfigError : public Error {
  public:
    using Error::Error;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const Range&) const = default;
};

enum class WeightPattern { AllToAll, Mask, Random };

/// Seeded random network: uniform draws inside each configured range.
struct GeneratedNetworkSpec {
    std::size_t n = 0;
    WeightPattern pattern = WeightPattern::AllToAll;
    SquareMatrix mask;             // pattern == Mask: nonzero entries are edges
    double edge_probability = 0.5;  // pattern == Random
    Range weight_range{1.0, 1.0};
    Range damping_range{0.9, 1.0};
    Range natural_frequency_range{-0.005, 0.005};
    double gamma = 1e-6;  // inertia_i = gamma * damping_i
    double frustration = 0.0;
    double coupling = 1.0;

    bool operator==(const GeneratedNetworkSpec&) const = default;
};

struct GeneratedInitialSpec {
    Range phase_range{0.0, 2.0};
    Range frequency_range{-0.1, 0.1};
    bool operator==(const GeneratedInitialSpec&) const = default;
};

struct IntegrationSpec {
    std::optional<double> dt;  // nullopt = auto
    double horizon = 1.0;
    std::int64_t stride = 1;
    bool operator==(const IntegrationSpec&) const = default;
};

struct CertificateSpec {
    std::optional<CertificateParameters> fixed;  // nullopt = grid search
    int search_grid = 64;
    bool operator==(const CertificateSpec&) const = default;
};

struct AnalysisSpec {
    std::optional<double> capture_threshold;  // nullopt = the certificate's d_infty
    double fit_floor = 1e-12;
    double residual_floor = 1e-7;
    bool operator==(const AnalysisSpec&) const = default;
};

struct OutputSpec {
    std::string timeseries;  // empty = not written
    std::string report;
    bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
    std::variant<OscillatorNetwork, GeneratedNetworkSpec> network;
    std::variant<EnsembleState, GeneratedInitialSpec> initial;
    IntegrationSpec integration;
    CertificateSpec certificate;
    AnalysisSpec analysis;
    OutputSpec outputs;
    std::uint64_t seed = 0;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Strict YAML parse: unknown keys are rejected and every default is materialized.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);

[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Canonical YAML form; parse_config(to_yaml(c)) == c.
[[nodiscard]] std::string to_yaml(const ExperimentConfig& config);

}  // namespace synccert
