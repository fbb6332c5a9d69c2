#pragma once

#include "synccert/diagnostics.hpp"
#include "synccert/network.hpp"

#include <array>
#include <optional>
#include <string>

namespace synccert {

/// One strict scalar inequality of the sufficient condition.
struct Inequality {
    enum class Sense { Below, Above };  // lhs < bound, lhs > bound

    std::string name;
    double lhs = 0.0;
    double bound = 0.0;
    Sense sense = Sense::Below;
    bool pass = false;
    /// Passes, but by less than kFragileMargin * |bound|.
    bool fragile = false;

    /// Signed slack; positive when the inequality holds.
    [[nodiscard]] double margin() const noexcept { return sense == Sense::Below ? bound - lhs : lhs - bound; }

    static Inequality make(std::string name, double lhs, double bound, Sense sense);
};

inline constexpr double kFragileMargin = 1e-9;

/// D_Omega + 2 K psi_u sin(alpha_bar): the forcing that frustration and heterogeneity exert on D_theta.
[[nodiscard]] double drift(const NetworkConstants& constants, double coupling);

/// mu = 64 N^2 psi_u^2 beta^2 drift (d_infty + sin alpha_bar) / (C^2 cos^2 alpha_bar sin^2 beta).
[[nodiscard]] double mu(const NetworkConstants& constants, double coupling, const CertificateParameters& params);

/// K C cos(d_infty + alpha_bar) / (4 N).
[[nodiscard]] double decay_rate(const NetworkConstants& constants, double coupling, double d_infty);

/// Initial-configuration condition: 2 gamma drift + (1 + 4 gamma K psi_u) D_theta(0) + 3 gamma D_omega(0) < beta < pi.
[[nodiscard]] Inequality check_a1(const NetworkConstants& constants, double coupling, double d_theta0, double d_omega0,
                                  double beta);

struct A2Result {
    Inequality frustration;
    std::array<Inequality, 4> gamma_k;
    std::array<Inequality, 2> k;
    double mu = 0.0;

    [[nodiscard]] bool pass() const noexcept;
    /// First failing sub-condition, if any.
    [[nodiscard]] const Inequality* first_failure() const noexcept;
};

/// Parameter conditions on (d_infty, gamma K, K). Throws when gamma is undefined or C = 0.
[[nodiscard]] A2Result check_a2(const NetworkConstants& constants, double coupling, const CertificateParameters& params);

struct Guarantees {
    double t_star_bound = 0.0;
    double omega_bound = 0.0;
    double rate = 0.0;
};

/// Capture-time bound, post-capture frequency-diameter bound and exponential rate.
/// When `e1_initial` is given and already below the capture level, t_star_bound is 0.
/// Throws naming the failing sub-condition unless check_a2 passes.
[[nodiscard]] Guarantees guarantees(const NetworkConstants& constants, double coupling,
                                    const CertificateParameters& params,
                                    std::optional<double> e1_initial = std::nullopt);

struct CertificateReport {
    CertificateParameters params;
    bool gamma_defined = false;
    bool connectivity_positive = false;
    Inequality a1;
    Inequality a2_frustration;
    std::array<Inequality, 4> a2_gamma_k;
    std::array<Inequality, 2> a2_k;
    double mu = 0.0;
    double t_star_bound = 0.0;
    double omega_bound = 0.0;
    double rate = 0.0;
    std::optional<double> e1_initial;
    bool verdict = false;
    bool fragile = false;
};

/// Full evaluation of the sufficient condition. Never throws for a failing network;
/// unavailable quantities are NaN and the verdict is false.
[[nodiscard]] CertificateReport certify(const NetworkConstants& constants, double coupling, double d_theta0,
                                        double d_omega0, const CertificateParameters& params,
                                        std::optional<double> e1_initial = std::nullopt);

/// anchor_e2 * exp(-rate (t - anchor_time)). Throws for t < anchor_time.
[[nodiscard]] double envelope(const CertificateReport& report, double anchor_time, double anchor_e2, double t);

/// Scans beta over (D_theta(0), pi) and d_infty over (0, min(beta, pi/2) - alpha_bar) on a
/// resolution x resolution interior grid; returns the passing pair with the largest rate
/// (first in scan order on ties), or nullopt.
[[nodiscard]] std::optional<CertificateParameters> search_certificate_params(const NetworkConstants& constants,
                                                                            double coupling, double d_theta0,
                                                                            double d_omega0, int resolution);

}  // namespace synccert
