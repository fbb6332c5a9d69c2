#include "synccert/certifier.hpp"

#include "synccert/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace synccert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double gamma_of(const NetworkConstants& c) {
    if (!c.gamma) throw Error("homogeneous damping required: m_i/d_i must be equal");
    return *c.gamma;
}

void require_connected(const NetworkConstants& c) {
    if (!(c.connectivity > 0.0)) throw Error("network condition violated: connectivity constant C must be positive");
}

}  // namespace

Inequality Inequality::make(std::string name, double lhs, double bound, Sense sense) {
    Inequality q{std::move(name), lhs, bound, sense, false, false};
    q.pass = sense == Sense::Below ? lhs < bound : lhs > bound;
    q.fragile = q.pass && q.margin() < kFragileMargin * std::abs(bound);
    return q;
}

double drift(const NetworkConstants& c, double coupling) {
    return c.d_omega + 2.0 * coupling * c.psi_u * std::sin(c.alpha_bar);
}

double mu(const NetworkConstants& c, double coupling, const CertificateParameters& p) {
    require_connected(c);
    const double n = static_cast<double>(c.n);
    const double ca = std::cos(c.alpha_bar);
    const double sb = std::sin(p.beta);
    return 64.0 * n * n * c.psi_u * c.psi_u * p.beta * p.beta * drift(c, coupling) *
           (p.d_infty + std::sin(c.alpha_bar)) / (c.connectivity * c.connectivity * ca * ca * sb * sb);
}

double decay_rate(const NetworkConstants& c, double coupling, double d_infty) {
    return coupling * c.connectivity * std::cos(d_infty + c.alpha_bar) / (4.0 * static_cast<double>(c.n));
}

Inequality check_a1(const NetworkConstants& c, double coupling, double d_theta0, double d_omega0, double beta) {
    const double g = gamma_of(c);
    const double lhs = 2.0 * g * drift(c, coupling) + (1.0 + 4.0 * g * coupling * c.psi_u) * d_theta0 +
                       3.0 * g * d_omega0;
    auto q = Inequality::make("initial energy < beta", lhs, beta, Inequality::Sense::Below);
    if (!(beta > 0.0 && beta < std::numbers::pi)) q.pass = q.fragile = false;
    return q;
}

bool A2Result::pass() const noexcept { return first_failure() == nullptr; }

const Inequality* A2Result::first_failure() const noexcept {
    if (!frustration.pass) return &frustration;
    for (const auto& q : gamma_k)
        if (!q.pass) return &q;
    for (const auto& q : k)
        if (!q.pass) return &q;
    return nullptr;
}

A2Result check_a2(const NetworkConstants& c, double coupling, const CertificateParameters& p) {
    const double g = gamma_of(c);
    require_connected(c);
    // d_infty beyond pi/2 is reported through the frustration inequality, not rejected.
    if (!(p.beta > 0.0 && p.beta < std::numbers::pi)) throw Error("certificate parameter beta must lie in (0, pi)");
    if (!(p.d_infty > 0.0) || !std::isfinite(p.d_infty)) throw Error("certificate parameter d_infty must be positive");

    using S = Inequality::Sense;
    const double n = static_cast<double>(c.n);
    const double cc = c.connectivity;
    const double ca = std::cos(c.alpha_bar);
    const double sb = std::sin(p.beta);
    const double cd = std::cos(p.d_infty + c.alpha_bar);
    const double pu2 = c.psi_u * c.psi_u;
    const double gk = g * coupling;

    A2Result r;
    r.frustration = Inequality::make("d_infty + alpha_bar < pi/2", p.d_infty + c.alpha_bar, std::numbers::pi / 2,
                                     S::Below);
    r.gamma_k = {
        Inequality::make("gamma K < C cos(alpha_bar) sin(beta) / (32 N psi_u^2 beta)", gk,
                         cc * ca * sb / (32.0 * n * pu2 * p.beta), S::Below),
        Inequality::make("gamma K < N beta / (C cos(alpha_bar) sin(beta))", gk, n * p.beta / (cc * ca * sb), S::Below),
        Inequality::make("gamma K < C cos(d_infty + alpha_bar) / (32 N psi_u^2)", gk, cc * cd / (32.0 * n * pu2),
                         S::Below),
        Inequality::make("gamma K < 2N / (C cos(d_infty + alpha_bar))", gk, 2.0 * n / (cc * cd), S::Below),
    };
    r.mu = mu(c, coupling, p);
    r.k = {
        Inequality::make("K > 8 N beta drift / (d_infty C cos(alpha_bar) sin(beta))", coupling,
                         8.0 * n * p.beta * drift(c, coupling) / (p.d_infty * cc * ca * sb), S::Above),
        Inequality::make("K > 8 N mu / (C cos(d_infty + alpha_bar))", coupling, 8.0 * n * r.mu / (cc * cd), S::Above),
    };
    return r;
}

namespace {

Guarantees bounds(const NetworkConstants& c, double coupling, const CertificateParameters& p,
                  std::optional<double> e1_initial) {
    const double g = *c.gamma;
    const double n = static_cast<double>(c.n);
    const double f = drift(c, coupling);
    const double ca = std::cos(c.alpha_bar);
    const double sb = std::sin(p.beta);

    Guarantees out;
    out.t_star_bound = p.beta / (2.0 * f);
    if (e1_initial) {
        const double capture_level = 8.0 * n * p.beta * f / (coupling * c.connectivity * ca * sb);
        if (*e1_initial <= capture_level) out.t_star_bound = 0.0;
    }
    out.omega_bound = 32.0 * n * n * c.psi_u * p.beta * p.beta * f /
                      (g * coupling * c.connectivity * c.connectivity * ca * ca * sb * sb);
    out.rate = decay_rate(c, coupling, p.d_infty);
    return out;
}

}  // namespace

Guarantees guarantees(const NetworkConstants& c, double coupling, const CertificateParameters& p,
                      std::optional<double> e1_initial) {
    const auto a2 = check_a2(c, coupling, p);
    if (const auto* failing = a2.first_failure()) {
        throw Error("certificate precondition failed: " + failing->name);
    }
    return bounds(c, coupling, p, e1_initial);
}

CertificateReport certify(const NetworkConstants& c, double coupling, double d_theta0, double d_omega0,
                          const CertificateParameters& p, std::optional<double> e1_initial) {
    CertificateReport r;
    r.params = p;
    r.e1_initial = e1_initial;
    r.gamma_defined = c.gamma.has_value();
    r.connectivity_positive = c.connectivity > 0.0;
    r.mu = r.t_star_bound = r.omega_bound = r.rate = kNaN;
    if (!r.gamma_defined || !r.connectivity_positive) return r;

    r.a1 = check_a1(c, coupling, d_theta0, d_omega0, p.beta);
    const auto a2 = check_a2(c, coupling, p);
    r.a2_frustration = a2.frustration;
    r.a2_gamma_k = a2.gamma_k;
    r.a2_k = a2.k;
    r.mu = a2.mu;

    const auto g = bounds(c, coupling, p, e1_initial);
    r.t_star_bound = g.t_star_bound;
    r.omega_bound = g.omega_bound;
    r.rate = g.rate;

    r.verdict = r.a1.pass && a2.pass();
    r.fragile = r.a1.fragile || r.a2_frustration.fragile;
    for (const auto& q : r.a2_gamma_k) r.fragile = r.fragile || q.fragile;
    for (const auto& q : r.a2_k) r.fragile = r.fragile || q.fragile;
    return r;
}

double envelope(const CertificateReport& report, double anchor_time, double anchor_e2, double t) {
    if (t < anchor_time) throw Error("envelope: t precedes the anchor time");
    return anchor_e2 * std::exp(-report.rate * (t - anchor_time));
}

std::optional<CertificateParameters> search_certificate_params(const NetworkConstants& c, double coupling,
                                                               double d_theta0, double d_omega0, int resolution) {
    if (resolution < 2) throw Error("search_certificate_params: grid resolution must be >= 2");
    if (!c.gamma || !(c.connectivity > 0.0)) return std::nullopt;
    if (!(d_theta0 < std::numbers::pi)) return std::nullopt;

    const double steps = static_cast<double>(resolution + 1);
    std::optional<CertificateParameters> best;
    double best_rate = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= resolution; ++i) {
        const double beta = d_theta0 + (std::numbers::pi - d_theta0) * i / steps;
        if (!(beta > 0.0)) continue;
        const double ceiling = std::min(beta, std::numbers::pi / 2) - c.alpha_bar;
        if (!(ceiling > 0.0)) continue;
        if (!check_a1(c, coupling, d_theta0, d_omega0, beta).pass) continue;
        for (int j = 1; j <= resolution; ++j) {
            const CertificateParameters p{beta, ceiling * j / steps};
            if (!check_a2(c, coupling, p).pass()) continue;
            const double rate = decay_rate(c, coupling, p.d_infty);
            if (rate > best_rate) {
                best_rate = rate;
                best = p;
            }
        }
    }
    return best;
}

}  // namespace synccert
