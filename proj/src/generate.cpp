#include "synccert/generate.hpp"

#include "synccert/error.hpp"

#include <cmath>
#include <numbers>

namespace synccert {

namespace {

void require_range(const Range& r, const char* name) {
    if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
        throw Error(std::string("generate: invalid range for ") + name);
    }
}

}  // namespace

OscillatorNetwork generate_network(const GeneratedNetworkSpec& spec, UniformSource& source) {
    if (spec.n < 1) throw Error("generate: n must be >= 1");
    require_range(spec.damping_range, "damping");
    require_range(spec.natural_frequency_range, "natural frequency");
    require_range(spec.weight_range, "weight");
    if (!(spec.damping_range.lo > 0.0)) throw Error("generate: damping range must be positive");
    if (!(spec.weight_range.lo >= 0.0)) throw Error("generate: weight range must be nonnegative");
    if (!(spec.gamma > 0.0)) throw Error("generate: gamma must be positive");
    if (!(spec.frustration >= 0.0 && spec.frustration < std::numbers::pi / 2)) {
        throw Error("generate: frustration must lie in [0, pi/2)");
    }
    if (!(spec.edge_probability >= 0.0 && spec.edge_probability <= 1.0)) {
        throw Error("generate: edge probability must lie in [0, 1]");
    }
    if (spec.pattern == WeightPattern::Mask && spec.mask.size() != spec.n) throw Error("generate: mask must be n x n");

    const std::size_t n = spec.n;
    OscillatorNetwork net;
    net.damping.resize(n);
    net.inertia.resize(n);
    net.natural_frequency.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        net.damping[i] = source.uniform(spec.damping_range);
        net.inertia[i] = spec.gamma * net.damping[i];
    }
    for (std::size_t i = 0; i < n; ++i) net.natural_frequency[i] = source.uniform(spec.natural_frequency_range);

    net.coupling = spec.coupling;
    net.weights = SquareMatrix(n);
    net.frustration = SquareMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            net.frustration(i, j) = spec.frustration;
            bool edge = true;
            switch (spec.pattern) {
                case WeightPattern::AllToAll: break;
                case WeightPattern::Mask: edge = spec.mask(i, j) != 0.0; break;
                case WeightPattern::Random: edge = source.unit() < spec.edge_probability; break;
            }
            if (edge) net.weights(i, j) = source.uniform(spec.weight_range);
        }
    }
    return net;
}

EnsembleState generate_initial(const GeneratedInitialSpec& spec, std::size_t n, UniformSource& source) {
    require_range(spec.phase_range, "phase");
    require_range(spec.frequency_range, "frequency");
    EnsembleState st;
    st.phase.resize(n);
    st.frequency.resize(n);
    for (std::size_t i = 0; i < n; ++i) st.phase[i] = source.uniform(spec.phase_range);
    for (std::size_t i = 0; i < n; ++i) st.frequency[i] = source.uniform(spec.frequency_range);
    return st;
}

std::pair<OscillatorNetwork, EnsembleState> generate_instance(const ExperimentConfig& config) {
    UniformSource source(config.seed);
    OscillatorNetwork net = std::holds_alternative<OscillatorNetwork>(config.network)
                                ? std::get<OscillatorNetwork>(config.network)
                                : generate_network(std::get<GeneratedNetworkSpec>(config.network), source);
    EnsembleState st = std::holds_alternative<EnsembleState>(config.initial)
                           ? std::get<EnsembleState>(config.initial)
                           : generate_initial(std::get<GeneratedInitialSpec>(config.initial), net.size(), source);
    st.time = 0.0;
    return {std::move(net), std::move(st)};
}

}  // namespace synccert
