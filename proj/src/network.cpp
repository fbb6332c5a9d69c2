#include "synccert/network.hpp"

#include "synccert/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace synccert {

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) throw Error("SquareMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

namespace {

void check_positive(const std::vector<double>& values, const char* field, const char* what,
                    std::vector<Violation>& out) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            out.push_back({std::string(field) + "[" + std::to_string(i) + "]",
                           std::string(what) + " must be strictly positive"});
        }
    }
}

}  // namespace

std::vector<Violation> validate(const OscillatorNetwork& network) {
    std::vector<Violation> out;
    const std::size_t n = network.size();
    if (n == 0) {
        out.push_back({"damping", "network must contain at least one oscillator"});
        return out;
    }
    if (network.inertia.size() != n) out.push_back({"inertia", "length must equal n"});
    if (network.natural_frequency.size() != n) out.push_back({"natural_frequency", "length must equal n"});
    if (network.weights.size() != n) out.push_back({"weights", "must be n x n"});
    if (network.frustration.size() != n) out.push_back({"frustration", "must be n x n"});
    if (!out.empty()) return out;

    check_positive(network.inertia, "inertia", "inertia", out);
    check_positive(network.damping, "damping", "damping", out);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(network.natural_frequency[i])) {
            out.push_back({"natural_frequency[" + std::to_string(i) + "]", "natural frequency must be finite"});
        }
    }
    // K = 0 is the uncoupled limit: dynamically legal, rejected later by the certifier.
    if (!(network.coupling >= 0.0) || !std::isfinite(network.coupling)) {
        out.push_back({"coupling", "coupling must be nonnegative"});
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::string at = "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
            const double w = network.weights(i, j);
            if (!(w >= 0.0) || !std::isfinite(w)) {
                out.push_back({"weights" + at, "weight must be nonnegative"});
            }
            const double a = network.frustration(i, j);
            if (i == j) {
                if (a != 0.0) {
                    out.push_back({"frustration" + at, "diagonal frustration nonzero at " + std::to_string(i)});
                }
            } else if (!(a >= 0.0 && a < std::numbers::pi / 2)) {
                out.push_back({"frustration" + at, "frustration must lie in [0, pi/2)"});
            }
        }
    }
    return out;
}

void require_valid(const OscillatorNetwork& network) {
    const auto violations = validate(network);
    if (violations.empty()) return;
    std::string msg = "invalid network:";
    for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.message;
    throw Error(msg);
}

double connectivity_constant(const SquareMatrix& weights, const std::vector<double>& damping) {
    const std::size_t n = damping.size();
    if (n < 2) return 0.0;

    // Normalized weights psi_ij / d_i, computed once.
    SquareMatrix scaled(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled(i, j) = weights(i, j) / damping[i];

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double value = scaled(i, j) + scaled(j, i);
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                value += std::min(scaled(i, k), scaled(j, k));
            }
            best = std::min(best, value);
        }
    }
    return best;
}

NetworkConstants compute_constants(const OscillatorNetwork& network) {
    require_valid(network);
    const std::size_t n = network.size();

    NetworkConstants c;
    c.n = n;
    c.connectivity = connectivity_constant(network.weights, network.damping);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            c.alpha_bar = std::max(c.alpha_bar, network.frustration(i, j));
            if (i != j) c.psi_u = std::max(c.psi_u, network.weights(i, j) / network.damping[i]);
        }
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double ratio_lo = lo;
    double ratio_hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = network.natural_frequency[i] / network.damping[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        const double g = network.inertia[i] / network.damping[i];
        ratio_lo = std::min(ratio_lo, g);
        ratio_hi = std::max(ratio_hi, g);
    }
    c.d_omega = hi - lo;
    if (ratio_hi - ratio_lo <= kGammaHomogeneityTolerance * ratio_hi) c.gamma = ratio_hi;
    return c;
}

}  // namespace synccert
