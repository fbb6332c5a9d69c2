#pragma once

#include "synccert/dynamics.hpp"
#include "synccert/network.hpp"

#include <optional>
#include <span>

namespace synccert {

/// Diameters and energies at one recorded sample.
struct DiagnosticsFrame {
    double time = 0.0;
    double d_theta = 0.0;
    double d_omega = 0.0;
    double d_a = 0.0;
    double d_b = 0.0;
    std::optional<double> e1;
    std::optional<double> e2;

    bool operator==(const DiagnosticsFrame&) const = default;
};

/// Free parameters of the sufficient condition: the phase-diameter ceiling beta and
/// the post-capture ceiling d_infty.
struct CertificateParameters {
    double beta = 0.0;
    double d_infty = 0.0;

    bool operator==(const CertificateParameters&) const = default;
};

/// Throws unless beta in (0, pi) and d_infty in (0, min(beta, pi/2)).
void require_valid(const CertificateParameters& params);

/// max - min. Throws on empty input.
[[nodiscard]] double diameter(std::span<const double> values);

/// Coefficients of the two energy functions, computed once per (constants, params).
///
///   E1 = D_theta + theta_omega * D_omega + theta_a * D_a
///   E2 = D_omega + omega_a * D_a + omega_b * D_b
struct EnergyCoefficients {
    double gamma = 0.0;
    double theta_omega = 0.0;  // C cos(alpha_bar) sin(beta) / (4 N psi_u beta) * gamma
    double theta_a = 0.0;      // 2 gamma^2
    double omega_a = 0.0;      // C cos(d_infty + alpha_bar) / (4 N psi_u) * gamma
    double omega_b = 0.0;      // 2 gamma^2

    /// Requires homogeneous gamma, connectivity > 0 and psi_u > 0.
    static EnergyCoefficients make(const NetworkConstants& constants, const CertificateParameters& params);

    [[nodiscard]] double e1(double d_theta, double d_omega, double d_a) const noexcept {
        return d_theta + theta_omega * d_omega + theta_a * d_a;
    }
    [[nodiscard]] double e2(double d_omega, double d_a, double d_b) const noexcept {
        return d_omega + omega_a * d_a + omega_b * d_b;
    }
};

[[nodiscard]] double energy_e1(const NetworkConstants& constants, const CertificateParameters& params,
                               double d_theta, double d_omega, double d_a);

[[nodiscard]] double energy_e2(const NetworkConstants& constants, const CertificateParameters& params,
                               double d_omega, double d_a, double d_b);

/// Reusable evaluator for frames; holds scratch buffers for a and b.
class FrameBuilder {
  public:
    FrameBuilder(const OscillatorNetwork& network, std::optional<EnergyCoefficients> coefficients);

    [[nodiscard]] DiagnosticsFrame operator()(double time, std::span<const double> phase,
                                              std::span<const double> frequency);

  private:
    const OscillatorNetwork* network_;
    std::optional<EnergyCoefficients> coefficients_;
    std::vector<double> accel_;
    std::vector<double> jerk_;
};

[[nodiscard]] DiagnosticsFrame make_frame(const OscillatorNetwork& network, const EnsembleState& state,
                                          const std::optional<EnergyCoefficients>& coefficients = std::nullopt);

}  // namespace synccert
