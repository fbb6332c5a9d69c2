#include "synccert/diagnostics.hpp"

#include "synccert/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace synccert {

void require_valid(const CertificateParameters& params) {
    if (!(params.beta > 0.0 && params.beta < std::numbers::pi)) {
        throw Error("certificate parameter beta must lie in (0, pi)");
    }
    const double ceiling = std::min(params.beta, std::numbers::pi / 2);
    if (!(params.d_infty > 0.0 && params.d_infty < ceiling)) {
        throw Error("certificate parameter d_infty must lie in (0, min(beta, pi/2))");
    }
}

double diameter(std::span<const double> values) {
    if (values.empty()) throw Error("diameter of an empty sequence");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

EnergyCoefficients EnergyCoefficients::make(const NetworkConstants& constants, const CertificateParameters& params) {
    if (!constants.gamma) throw Error("homogeneous damping required: m_i/d_i must be equal");
    if (!(constants.connectivity > 0.0)) throw Error("energy functions need a positive connectivity constant");
    if (!(constants.psi_u > 0.0)) throw Error("energy functions need psi_u > 0");
    require_valid(params);

    const double g = *constants.gamma;
    const double n = static_cast<double>(constants.n);
    const double c = constants.connectivity;
    EnergyCoefficients k;
    k.gamma = g;
    k.theta_omega = c * std::cos(constants.alpha_bar) * std::sin(params.beta) / (4.0 * n * constants.psi_u * params.beta) * g;
    k.theta_a = 2.0 * g * g;
    k.omega_a = c * std::cos(params.d_infty + constants.alpha_bar) / (4.0 * n * constants.psi_u) * g;
    k.omega_b = 2.0 * g * g;
    return k;
}

double energy_e1(const NetworkConstants& constants, const CertificateParameters& params, double d_theta,
                 double d_omega, double d_a) {
    return EnergyCoefficients::make(constants, params).e1(d_theta, d_omega, d_a);
}

double energy_e2(const NetworkConstants& constants, const CertificateParameters& params, double d_omega,
                 double d_a, double d_b) {
    return EnergyCoefficients::make(constants, params).e2(d_omega, d_a, d_b);
}

FrameBuilder::FrameBuilder(const OscillatorNetwork& network, std::optional<EnergyCoefficients> coefficients)
    : network_(&network), coefficients_(coefficients), accel_(network.size()), jerk_(network.size()) {}

DiagnosticsFrame FrameBuilder::operator()(double time, std::span<const double> phase,
                                          std::span<const double> frequency) {
    kernel::acceleration(*network_, phase, frequency, accel_);
    kernel::jerk(*network_, phase, frequency, accel_, jerk_);

    DiagnosticsFrame f;
    f.time = time;
    f.d_theta = diameter(phase);
    f.d_omega = diameter(frequency);
    f.d_a = diameter(accel_);
    f.d_b = diameter(jerk_);
    if (coefficients_) {
        f.e1 = coefficients_->e1(f.d_theta, f.d_omega, f.d_a);
        f.e2 = coefficients_->e2(f.d_omega, f.d_a, f.d_b);
    }
    return f;
}

DiagnosticsFrame make_frame(const OscillatorNetwork& network, const EnsembleState& state,
                            const std::optional<EnergyCoefficients>& coefficients) {
    require_valid_state(network, state);
    FrameBuilder build(network, coefficients);
    return build(state.time, state.phase, state.frequency);
}

}  // namespace synccert
