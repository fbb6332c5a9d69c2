#pragma once

#include "synccert/diagnostics.hpp"
#include "synccert/dynamics.hpp"
#include "synccert/network.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace synccert {

struct TrajectorySample {
    EnsembleState state;
    DiagnosticsFrame frame;

    bool operator==(const TrajectorySample&) const = default;
};

struct TrajectoryRecord {
    OscillatorNetwork network;
    double dt = 0.0;
    std::int64_t stride = 1;
    std::string integrator = "rk4-classical";
    std::vector<std::string> warnings;
    std::vector<TrajectorySample> samples;

    [[nodiscard]] double sample_spacing() const noexcept { return dt * static_cast<double>(stride); }

    bool operator==(const TrajectoryRecord&) const = default;
};

struct SimulationOptions {
    double dt = 0.0;
    double horizon = 0.0;
    std::int64_t stride = 1;
    /// When set, every recorded frame carries E1 and E2.
    std::optional<EnergyCoefficients> energies;
};

/// Number of recorded samples: floor(horizon / (dt * stride)) + 1.
[[nodiscard]] std::int64_t recorded_sample_count(double dt, double horizon, std::int64_t stride);

/// Integrates with fixed-step RK4 from `initial` and records every stride-th state with
/// its diagnostics frame. Sample k sits at initial.time + k * stride * dt.
[[nodiscard]] TrajectoryRecord simulate(const OscillatorNetwork& network, const EnsembleState& initial,
                                        const SimulationOptions& options);

/// Earliest sample time after which every sample has D_theta < threshold.
[[nodiscard]] std::optional<double> detect_capture(const TrajectoryRecord& trajectory, double threshold);

/// Index form of detect_capture.
[[nodiscard]] std::optional<std::size_t> capture_index(const TrajectoryRecord& trajectory, double threshold);

}  // namespace synccert
