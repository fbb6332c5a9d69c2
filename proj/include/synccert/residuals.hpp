#pragma once

#include "synccert/diagnostics.hpp"
#include "synccert/network.hpp"
#include "synccert/trajectory.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace synccert {

/// Finite-difference residuals of one differential inequality "LHS <= RHS" at interior
/// samples: residual = LHS - RHS, which the inequality asserts is <= 0 almost everywhere.
///
/// Derivatives come from central differences at the recording spacing h. Each sample
/// carries its own tolerance eps_fd = 10 * h * c * max|Q''| over the three-point
/// neighbourhood, where Q is the differentiated quantity and c its derivative
/// coefficient in the LHS.
struct ResidualSeries {
    std::string name;
    std::vector<double> time;
    std::vector<double> residual;
    std::vector<double> tolerance;

    [[nodiscard]] std::size_t size() const noexcept { return residual.size(); }
    /// Fraction of samples with residual <= tolerance; 1 for an empty series.
    [[nodiscard]] double pass_fraction() const noexcept;
    [[nodiscard]] double max_residual() const noexcept;
};

/// Closed time interval of samples a check runs over.
struct TimeWindow {
    double begin = -std::numeric_limits<double>::infinity();
    double end = std::numeric_limits<double>::infinity();
};

/// dE1/dt <= 2 (D_Omega + 2 K psi_u sin alpha_bar) - (K C cos alpha_bar sin beta / (2 N beta)) E1.
[[nodiscard]] ResidualSeries gronwall_residual_e1(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                                  const CertificateParameters& params, double coupling,
                                                  TimeWindow window = {});

/// dE2/dt <= -(K C cos(d_infty + alpha_bar) / (4 N)) E2, meaningful after capture.
[[nodiscard]] ResidualSeries gronwall_residual_e2(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                                  const CertificateParameters& params, double coupling,
                                                  TimeWindow window = {});

/// gamma D_theta'' + D_theta' <= D_Omega + 2 K psi_u sin alpha_bar - (K C cos alpha_bar sin beta / (N beta)) D_theta.
[[nodiscard]] ResidualSeries phase_diameter_residual(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                                     const CertificateParameters& params, double coupling,
                                                     TimeWindow window = {});

/// gamma D_a' + D_a <= 2 K psi_u D_omega.
[[nodiscard]] ResidualSeries acceleration_diameter_residual(const TrajectoryRecord& trajectory,
                                                            const NetworkConstants& constants, double coupling,
                                                            TimeWindow window = {});

/// gamma D_omega' + D_omega <= D_Omega + 2 K psi_u sin alpha_bar + 2 K psi_u D_theta.
[[nodiscard]] ResidualSeries frequency_diameter_residual(const TrajectoryRecord& trajectory,
                                                         const NetworkConstants& constants, double coupling,
                                                         TimeWindow window = {});

/// gamma D_omega'' + D_omega' <= -(K C cos(d_infty + alpha_bar) / N) D_omega, after capture.
[[nodiscard]] ResidualSeries frequency_second_order_residual(const TrajectoryRecord& trajectory,
                                                             const NetworkConstants& constants,
                                                             const CertificateParameters& params, double coupling,
                                                             TimeWindow window = {});

/// gamma D_b' + D_b <= 2 K psi_u D_a + (mu / gamma) D_omega, after capture.
[[nodiscard]] ResidualSeries jerk_diameter_residual(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                                    const CertificateParameters& params, double coupling,
                                                    TimeWindow window = {});

/// The seven checks above on one trajectory. The phase-cohesion checks (E1, D_theta,
/// D_a, D_omega) run from t = 0; the frequency-decay checks (D_omega second order,
/// D_b, E2) from `capture_time`. All stop at the first sample whose D_omega falls
/// below `noise_floor`, where roundoff in a and b dominates the signal.
[[nodiscard]] std::vector<ResidualSeries> residual_suite(const TrajectoryRecord& trajectory,
                                                         const NetworkConstants& constants,
                                                         const CertificateParameters& params, double coupling,
                                                         double capture_time, double noise_floor);

inline constexpr double kDefaultResidualNoiseFloor = 1e-7;

struct DecayFit {
    double rate = 0.0;
    double r_squared = 0.0;
    std::size_t samples = 0;
};

inline constexpr double kDefaultFitFloor = 1e-12;
inline constexpr std::size_t kMinFitSamples = 10;

/// Negated least-squares slope of ln(value) against time over samples with value > floor.
[[nodiscard]] DecayFit fit_log_linear_decay(std::span<const double> time, std::span<const double> value,
                                            double floor = kDefaultFitFloor);

/// fit_log_linear_decay on D_omega over the samples inside `window`.
[[nodiscard]] DecayFit fit_decay_rate(const TrajectoryRecord& trajectory, TimeWindow window,
                                      double floor = kDefaultFitFloor);

}  // namespace synccert
