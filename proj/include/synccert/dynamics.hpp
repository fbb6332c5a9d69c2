#pragma once

#include "synccert/network.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace synccert {

/// Dynamic state: unwrapped phases and their time derivatives.
struct EnsembleState {
    double time = 0.0;
    std::vector<double> phase;
    std::vector<double> frequency;

    bool operator==(const EnsembleState&) const = default;
};

/// Throws "invalid state" when lengths disagree with the network or any entry is non-finite.
void require_valid_state(const OscillatorNetwork& network, const EnsembleState& state);

struct VectorFieldValue {
    std::vector<double> phase_rate;
    std::vector<double> frequency_rate;
};

/// m_i dw_i/dt = Omega_i - d_i w_i + (K/N) sum_k psi_ik sin(theta_k - theta_i + alpha_ik).
[[nodiscard]] VectorFieldValue vector_field(const OscillatorNetwork& network, const EnsembleState& state);

/// a_i = dw_i/dt.
[[nodiscard]] std::vector<double> acceleration(const OscillatorNetwork& network, const EnsembleState& state);

/// b_i = da_i/dt, from differentiating the frequency equation once along the flow.
[[nodiscard]] std::vector<double> jerk(const OscillatorNetwork& network, const EnsembleState& state);

/// Allocation-free kernels shared by the public functions above and the integrator.
namespace kernel {

void acceleration(const OscillatorNetwork& network, std::span<const double> phase,
                  std::span<const double> frequency, std::span<double> out);

void jerk(const OscillatorNetwork& network, std::span<const double> phase, std::span<const double> frequency,
          std::span<const double> accel, std::span<double> out);

}  // namespace kernel

/// Classical fourth-order Runge-Kutta on the first-order system (theta, omega).
///
/// Owns its stage buffers so repeated steps do not allocate. The state update is
/// accumulated with Kahan compensation: with dt ~ 1e-7 the per-step phase increment
/// sits ~1e-6 ulp above the phase itself, and plain rounding biases each oscillator's
/// effective frequency by up to ~1e-9. The compensation terms persist across calls,
/// so one stepper must follow one trajectory; reset() starts a new one.
class Rk4Stepper {
  public:
    explicit Rk4Stepper(const OscillatorNetwork& network);

    /// Advances phase/frequency in place by dt. Returns false if the result is non-finite.
    bool step(std::span<double> phase, std::span<double> frequency, double dt);

    void reset();

  private:
    const OscillatorNetwork* network_;
    std::vector<double> k1p_, k1f_, k2p_, k2f_, k3p_, k3f_, k4p_, k4f_;
    std::vector<double> tmp_p_, tmp_f_;
    std::vector<double> carry_p_, carry_f_;
};

/// One RK4 step. Throws BlowUpError if the result is non-finite.
[[nodiscard]] EnsembleState rk4_step(const OscillatorNetwork& network, const EnsembleState& state, double dt);

/// gamma / 10 when the network is homogeneous, else min_i(m_i / d_i) / 10.
[[nodiscard]] double default_time_step(const OscillatorNetwork& network);

}  // namespace synccert
