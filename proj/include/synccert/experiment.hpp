#pragma once

#include "synccert/certifier.hpp"
#include "synccert/config.hpp"
#include "synccert/network.hpp"
#include "synccert/residuals.hpp"
#include "synccert/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace synccert {

inline constexpr int kExitOk = 0;
inline constexpr int kExitHardError = 1;
inline constexpr int kExitCertificateFailed = 2;

struct ResidualSummary {
    std::string name;
    std::size_t samples = 0;
    double pass_fraction = 1.0;
    double max_residual = 0.0;
};

/// Everything a completed run reports. Contains no wall-clock data so reruns are
/// byte-identical.
struct SummaryReport {
    std::string version;
    std::string generator;
    std::string integrator;
    NetworkConstants constants;
    bool certificate_searched = false;
    std::optional<CertificateReport> certificate;  // nullopt when no parameters were found
    bool simulated = false;
    double dt = 0.0;
    std::int64_t stride = 1;
    std::size_t samples = 0;
    double capture_threshold = 0.0;
    std::optional<double> capture_time;
    std::optional<DecayFit> fit;
    std::string fit_note;
    std::optional<double> anchor_e2;
    DiagnosticsFrame initial_frame;
    DiagnosticsFrame final_frame;
    double residual_floor = 0.0;
    std::vector<ResidualSummary> residuals;
    std::vector<std::string> warnings;
    std::string config_echo;
    int exit_code = kExitHardError;
};

struct RunResult {
    SummaryReport report;
    TrajectoryRecord trajectory;
};

/// Constants and certificate only (the `certify` subcommand).
[[nodiscard]] SummaryReport evaluate_certificate(const ExperimentConfig& config);

/// validate -> constants -> certify (or search) -> simulate -> diagnostics -> fit, then
/// writes the configured outputs atomically. Throws on hard errors (exit code 1).
[[nodiscard]] RunResult run(const ExperimentConfig& config);

/// Step size actually used for a config: the configured dt or the stiffness default.
[[nodiscard]] double effective_time_step(const ExperimentConfig& config, const OscillatorNetwork& network);

enum class SweepAxis { Coupling, GammaScale, Frustration, Seed };

[[nodiscard]] SweepAxis parse_sweep_axis(const std::string& name);
[[nodiscard]] std::string to_string(SweepAxis axis);

/// The base config with one axis overridden; output paths get a "-<index>" suffix.
[[nodiscard]] ExperimentConfig apply_sweep_value(const ExperimentConfig& base, SweepAxis axis, double value,
                                                 std::size_t index);

struct SweepEntry {
    double value = 0.0;
    std::optional<SummaryReport> report;
    std::string error;
    int exit_code = kExitHardError;
};

/// Independent runs over `values`, executed on up to `threads` workers (0 = hardware
/// concurrency). Results are in input order; a failing run is recorded, not thrown.
[[nodiscard]] std::vector<SweepEntry> sweep(const ExperimentConfig& base, SweepAxis axis,
                                            const std::vector<double>& values, unsigned threads = 0);

/// The reference four-oscillator scenario with dt = 1e-7, horizon 0.2, stride 10 and
/// outputs under `out_dir` (none when empty).
[[nodiscard]] ExperimentConfig reference_config(const std::string& out_dir);

/// `t,theta_1..theta_N,omega_1..omega_N,D_theta,D_omega,D_a,D_b,E1,E2,envelope`.
[[nodiscard]] std::string timeseries_header(std::size_t n);

/// Writes the timeseries CSV. The envelope column is filled from `anchor_index` on when
/// the report carries a passing certificate and an anchor.
void write_timeseries(const std::string& path, const TrajectoryRecord& trajectory, const SummaryReport& report);

[[nodiscard]] std::string report_json(const SummaryReport& report);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomically(const std::string& path, const std::string& contents);

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_double(double v);

}  // namespace synccert
