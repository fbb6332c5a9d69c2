#include "synccert/dynamics.hpp"

#include "synccert/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace synccert {

void require_valid_state(const OscillatorNetwork& network, const EnsembleState& state) {
    const std::size_t n = network.size();
    if (state.phase.size() != n || state.frequency.size() != n) {
        throw Error("invalid state: expected " + std::to_string(n) + " phases and frequencies");
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::isfinite(state.time) || !std::all_of(state.phase.begin(), state.phase.end(), finite) ||
        !std::all_of(state.frequency.begin(), state.frequency.end(), finite)) {
        throw Error("invalid state: non-finite entry");
    }
}

namespace kernel {

void acceleration(const OscillatorNetwork& network, std::span<const double> phase,
                  std::span<const double> frequency, std::span<double> out) {
    const std::size_t n = network.size();
    const double scale = network.coupling / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* w = network.weights.row(i);
        const double* alpha = network.frustration.row(i);
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            // alpha_ii = 0, so the self term is sin(0) = 0.
            if (k == i || w[k] == 0.0) continue;
            sum += w[k] * std::sin(phase[k] - phase[i] + alpha[k]);
        }
        out[i] = (network.natural_frequency[i] - network.damping[i] * frequency[i] + scale * sum) /
                 network.inertia[i];
    }
}

void jerk(const OscillatorNetwork& network, std::span<const double> phase, std::span<const double> frequency,
          std::span<const double> accel, std::span<double> out) {
    const std::size_t n = network.size();
    const double scale = network.coupling / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* w = network.weights.row(i);
        const double* alpha = network.frustration.row(i);
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i || w[k] == 0.0) continue;
            sum += w[k] * std::cos(phase[k] - phase[i] + alpha[k]) * (frequency[k] - frequency[i]);
        }
        out[i] = (-network.damping[i] * accel[i] + scale * sum) / network.inertia[i];
    }
}

}  // namespace kernel

VectorFieldValue vector_field(const OscillatorNetwork& network, const EnsembleState& state) {
    require_valid_state(network, state);
    VectorFieldValue v;
    v.phase_rate = state.frequency;
    v.frequency_rate.resize(network.size());
    kernel::acceleration(network, state.phase, state.frequency, v.frequency_rate);
    return v;
}

std::vector<double> acceleration(const OscillatorNetwork& network, const EnsembleState& state) {
    return vector_field(network, state).frequency_rate;
}

std::vector<double> jerk(const OscillatorNetwork& network, const EnsembleState& state) {
    auto a = acceleration(network, state);
    std::vector<double> b(network.size());
    kernel::jerk(network, state.phase, state.frequency, a, b);
    return b;
}

Rk4Stepper::Rk4Stepper(const OscillatorNetwork& network) : network_(&network) {
    const std::size_t n = network.size();
    for (auto* v : {&k1p_, &k1f_, &k2p_, &k2f_, &k3p_, &k3f_, &k4p_, &k4f_, &tmp_p_, &tmp_f_}) v->assign(n, 0.0);
    reset();
}

void Rk4Stepper::reset() {
    carry_p_.assign(network_->size(), 0.0);
    carry_f_.assign(network_->size(), 0.0);
}

namespace {

// Kahan-compensated x += increment.
inline void accumulate(double& x, double& carry, double increment) {
    const double y = increment - carry;
    const double t = x + y;
    carry = (t - x) - y;
    x = t;
}

}  // namespace

bool Rk4Stepper::step(std::span<double> phase, std::span<double> frequency, double dt) {
    const std::size_t n = phase.size();
    const double half = 0.5 * dt;

    std::copy(frequency.begin(), frequency.end(), k1p_.begin());
    kernel::acceleration(*network_, phase, frequency, k1f_);

    for (std::size_t i = 0; i < n; ++i) {
        tmp_p_[i] = phase[i] + half * k1p_[i];
        tmp_f_[i] = frequency[i] + half * k1f_[i];
    }
    std::copy(tmp_f_.begin(), tmp_f_.end(), k2p_.begin());
    kernel::acceleration(*network_, tmp_p_, tmp_f_, k2f_);

    for (std::size_t i = 0; i < n; ++i) {
        tmp_p_[i] = phase[i] + half * k2p_[i];
        tmp_f_[i] = frequency[i] + half * k2f_[i];
    }
    std::copy(tmp_f_.begin(), tmp_f_.end(), k3p_.begin());
    kernel::acceleration(*network_, tmp_p_, tmp_f_, k3f_);

    for (std::size_t i = 0; i < n; ++i) {
        tmp_p_[i] = phase[i] + dt * k3p_[i];
        tmp_f_[i] = frequency[i] + dt * k3f_[i];
    }
    std::copy(tmp_f_.begin(), tmp_f_.end(), k4p_.begin());
    kernel::acceleration(*network_, tmp_p_, tmp_f_, k4f_);

    const double sixth = dt / 6.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
        accumulate(phase[i], carry_p_[i], sixth * (k1p_[i] + 2.0 * k2p_[i] + 2.0 * k3p_[i] + k4p_[i]));
        accumulate(frequency[i], carry_f_[i], sixth * (k1f_[i] + 2.0 * k2f_[i] + 2.0 * k3f_[i] + k4f_[i]));
        finite = finite && std::isfinite(phase[i]) && std::isfinite(frequency[i]);
    }
    return finite;
}

EnsembleState rk4_step(const OscillatorNetwork& network, const EnsembleState& state, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("rk4_step: dt must be positive");
    require_valid_state(network, state);
    EnsembleState next = state;
    Rk4Stepper stepper(network);
    if (!stepper.step(next.phase, next.frequency, dt)) throw BlowUpError(0, state.time);
    next.time = state.time + dt;
    return next;
}

double default_time_step(const OscillatorNetwork& network) {
    double relax = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < network.size(); ++i) relax = std::min(relax, network.inertia[i] / network.damping[i]);
    return relax / 10.0;
}

}  // namespace synccert
