#pragma once

#include "synccert/config.hpp"
#include "synccert/dynamics.hpp"
#include "synccert/network.hpp"

#include <cstdint>
#include <random>
#include <utility>

namespace synccert {

/// Identity of the instance generator, recorded in every report. Bump the suffix if the
/// draw order or the uniform mapping ever changes.
inline constexpr const char* kGeneratorId = "mt19937_64/uniform53-open/v1";

/// Uniform draws in the open interval (lo, hi) from a 64-bit Mersenne Twister. The
/// mapping from raw words to doubles is spelled out here so results do not depend on
/// the standard library's distribution implementations.
class UniformSource {
  public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    /// (k + 0.5) / 2^53 for the top 53 bits k: strictly inside (0, 1).
    double unit() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    double uniform(const Range& r) { return uniform(r.lo, r.hi); }

  private:
    std::mt19937_64 engine_;
};

/// Materializes the network and initial state of a config. Inline parts are returned
/// unchanged; seeded parts are drawn network first (damping, natural frequency, then
/// weights row-major), then initial phases and frequencies, all from one stream.
[[nodiscard]] std::pair<OscillatorNetwork, EnsembleState> generate_instance(const ExperimentConfig& config);

[[nodiscard]] OscillatorNetwork generate_network(const GeneratedNetworkSpec& spec, UniformSource& source);

[[nodiscard]] EnsembleState generate_initial(const GeneratedInitialSpec& spec, std::size_t n, UniformSource& source);

}  // namespace synccert
