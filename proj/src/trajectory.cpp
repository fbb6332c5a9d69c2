#include "synccert/trajectory.hpp"

#include "synccert/error.hpp"

#include <cmath>
#include <sstream>

namespace synccert {

std::int64_t recorded_sample_count(double dt, double horizon, std::int64_t stride) {
    const double spacing = dt * static_cast<double>(stride);
    // Guard against horizon/spacing landing a hair below an integer.
    const double intervals = std::floor(horizon / spacing * (1.0 + 1e-12));
    return static_cast<std::int64_t>(intervals) + 1;
}

TrajectoryRecord simulate(const OscillatorNetwork& network, const EnsembleState& initial,
                          const SimulationOptions& options) {
    require_valid(network);
    require_valid_state(network, initial);
    if (!(options.dt > 0.0) || !std::isfinite(options.dt)) throw Error("simulate: dt must be positive");
    if (!(options.horizon > 0.0) || !std::isfinite(options.horizon)) throw Error("simulate: horizon must be positive");
    if (options.stride < 1) throw Error("simulate: stride must be >= 1");

    TrajectoryRecord record;
    record.network = network;
    record.dt = options.dt;
    record.stride = options.stride;

    const auto constants = compute_constants(network);
    if (constants.gamma && options.dt > 2.0 * *constants.gamma) {
        std::ostringstream msg;
        msg << "stiffness: dt = " << options.dt << " exceeds 2*gamma = " << 2.0 * *constants.gamma;
        record.warnings.push_back(msg.str());
    }

    const std::int64_t count = recorded_sample_count(options.dt, options.horizon, options.stride);
    record.samples.reserve(static_cast<std::size_t>(count));

    std::vector<double> phase = initial.phase;
    std::vector<double> frequency = initial.frequency;
    Rk4Stepper stepper(network);
    FrameBuilder frames(network, options.energies);

    const auto record_sample = [&](std::int64_t step) {
        const double t = initial.time + static_cast<double>(step) * options.dt;
        TrajectorySample s;
        s.state.time = t;
        s.state.phase = phase;
        s.state.frequency = frequency;
        s.frame = frames(t, phase, frequency);
        record.samples.push_back(std::move(s));
    };

    record_sample(0);
    std::int64_t step = 0;
    for (std::int64_t k = 1; k < count; ++k) {
        for (std::int64_t j = 0; j < options.stride; ++j) {
            ++step;
            if (!stepper.step(phase, frequency, options.dt)) {
                throw BlowUpError(step, initial.time + static_cast<double>(step) * options.dt);
            }
        }
        record_sample(step);
    }
    return record;
}

std::optional<std::size_t> capture_index(const TrajectoryRecord& trajectory, double threshold) {
    if (trajectory.samples.empty()) throw Error("detect_capture: empty trajectory");
    if (!(threshold > 0.0)) throw Error("detect_capture: threshold must be positive");
    std::optional<std::size_t> first;
    for (std::size_t i = trajectory.samples.size(); i-- > 0;) {
        if (!(trajectory.samples[i].frame.d_theta < threshold)) break;
        first = i;
    }
    return first;
}

std::optional<double> detect_capture(const TrajectoryRecord& trajectory, double threshold) {
    const auto idx = capture_index(trajectory, threshold);
    if (!idx) return std::nullopt;
    return trajectory.samples[*idx].frame.time;
}

}  // namespace synccert
