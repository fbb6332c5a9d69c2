#pragma once

#include "synccert/dynamics.hpp"
#include "synccert/network.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace testing_support {

using synccert::EnsembleState;
using synccert::OscillatorNetwork;
using synccert::SquareMatrix;

/// Small seeded generator for property tests.
class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    bool coin(double p) { return uniform(0.0, 1.0) < p; }

    std::vector<double> vec(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng_);
        return p;
    }

    /// Random valid network with homogeneous gamma.
    OscillatorNetwork network(std::size_t n, double gamma, double coupling, double edge_p = 0.7,
                              double max_alpha = 0.2) {
        OscillatorNetwork net;
        net.damping = vec(n, 0.5, 1.5);
        net.inertia.resize(n);
        for (std::size_t i = 0; i < n; ++i) net.inertia[i] = gamma * net.damping[i];
        net.natural_frequency = vec(n, -0.5, 0.5);
        net.coupling = coupling;
        net.weights = SquareMatrix(n);
        net.frustration = SquareMatrix(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                net.weights(i, j) = coin(edge_p) ? uniform(0.1, 2.0) : 0.0;
                net.frustration(i, j) = uniform(0.0, max_alpha);
            }
        }
        return net;
    }

    EnsembleState state(std::size_t n, double phase_span = 2.0, double freq_span = 1.0) {
        EnsembleState s;
        s.phase = vec(n, 0.0, phase_span);
        s.frequency = vec(n, -freq_span, freq_span);
        return s;
    }

  private:
    std::mt19937_64 rng_;
};

inline OscillatorNetwork permuted(const OscillatorNetwork& net, const std::vector<std::size_t>& p) {
    const std::size_t n = net.size();
    OscillatorNetwork out = net;
    for (std::size_t i = 0; i < n; ++i) {
        out.inertia[i] = net.inertia[p[i]];
        out.damping[i] = net.damping[p[i]];
        out.natural_frequency[i] = net.natural_frequency[p[i]];
        for (std::size_t j = 0; j < n; ++j) {
            out.weights(i, j) = net.weights(p[i], p[j]);
            out.frustration(i, j) = net.frustration(p[i], p[j]);
        }
    }
    return out;
}

inline std::vector<double> permuted(const std::vector<double>& v, const std::vector<std::size_t>& p) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[p[i]];
    return out;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// N = 2, m = d = 1, Omega = 0, K = 2, unit off-diagonal weights, no frustration.
inline OscillatorNetwork two_node() {
    OscillatorNetwork net;
    net.inertia = {1.0, 1.0};
    net.damping = {1.0, 1.0};
    net.natural_frequency = {0.0, 0.0};
    net.coupling = 2.0;
    net.weights = SquareMatrix{{0, 1}, {1, 0}};
    net.frustration = SquareMatrix(2);
    return net;
}

}  // namespace testing_support
