#include "synccert/residuals.hpp"

#include "synccert/certifier.hpp"
#include "synccert/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace synccert {

double ResidualSeries::pass_fraction() const noexcept {
    if (residual.empty()) return 1.0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < residual.size(); ++i) ok += residual[i] <= tolerance[i] ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(residual.size());
}

double ResidualSeries::max_residual() const noexcept {
    double m = -std::numeric_limits<double>::infinity();
    for (double r : residual) m = std::max(m, r);
    return m;
}

namespace {

/// Per-sample scalar series plus the finite-difference helpers shared by every check.
class Series {
  public:
    Series(const TrajectoryRecord& trajectory, const std::function<double(const DiagnosticsFrame&)>& pick)
        : h_(trajectory.sample_spacing()) {
        values_.reserve(trajectory.samples.size());
        for (const auto& s : trajectory.samples) values_.push_back(pick(s.frame));
    }

    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] double first(std::size_t i) const { return (values_[i + 1] - values_[i - 1]) / (2.0 * h_); }
    [[nodiscard]] double second(std::size_t i) const {
        return (values_[i + 1] - 2.0 * values_[i] + values_[i - 1]) / (h_ * h_);
    }
    /// 10 h max|Q''| over samples i-1, i, i+1 (interior ones only).
    [[nodiscard]] double fd_tolerance(std::size_t i) const {
        double m = std::abs(second(i));
        if (i >= 2) m = std::max(m, std::abs(second(i - 1)));
        if (i + 2 < values_.size()) m = std::max(m, std::abs(second(i + 1)));
        return 10.0 * h_ * m;
    }

  private:
    double h_;
    std::vector<double> values_;
};

struct IndexRange {
    std::size_t begin;
    std::size_t end;  // exclusive
};

IndexRange interior(const TrajectoryRecord& trajectory, TimeWindow window) {
    const auto& s = trajectory.samples;
    if (s.size() < 3) throw Error("residual check needs at least 3 samples");
    std::size_t b = 1;
    while (b + 1 < s.size() && s[b].frame.time < window.begin) ++b;
    std::size_t e = b;
    while (e + 1 < s.size() && s[e].frame.time <= window.end) ++e;
    return {b, e};
}

template <typename Residual>
ResidualSeries collect(std::string name, const TrajectoryRecord& trajectory, TimeWindow window, Residual&& fn) {
    ResidualSeries out;
    out.name = std::move(name);
    const auto range = interior(trajectory, window);
    const std::size_t count = range.end - range.begin;
    out.time.reserve(count);
    out.residual.reserve(count);
    out.tolerance.reserve(count);
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const auto [residual, tolerance] = fn(i);
        out.time.push_back(trajectory.samples[i].frame.time);
        out.residual.push_back(residual);
        out.tolerance.push_back(tolerance);
    }
    return out;
}

double require_gamma(const NetworkConstants& c) {
    if (!c.gamma) throw Error("homogeneous damping required: m_i/d_i must be equal");
    return *c.gamma;
}

}  // namespace

ResidualSeries gronwall_residual_e1(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                    const CertificateParameters& params, double coupling, TimeWindow window) {
    const auto k = EnergyCoefficients::make(constants, params);
    const double n = static_cast<double>(constants.n);
    const double source = 2.0 * drift(constants, coupling);
    const double damping = coupling * constants.connectivity * std::cos(constants.alpha_bar) * std::sin(params.beta) /
                           (2.0 * n * params.beta);
    const Series e1(trajectory, [&](const DiagnosticsFrame& f) { return k.e1(f.d_theta, f.d_omega, f.d_a); });
    return collect("E1 gronwall", trajectory, window, [&](std::size_t i) {
        return std::pair{e1.first(i) - (source - damping * e1[i]), e1.fd_tolerance(i)};
    });
}

ResidualSeries gronwall_residual_e2(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                    const CertificateParameters& params, double coupling, TimeWindow window) {
    const auto k = EnergyCoefficients::make(constants, params);
    const double rate = decay_rate(constants, coupling, params.d_infty);
    const Series e2(trajectory, [&](const DiagnosticsFrame& f) { return k.e2(f.d_omega, f.d_a, f.d_b); });
    return collect("E2 gronwall", trajectory, window, [&](std::size_t i) {
        return std::pair{e2.first(i) + rate * e2[i], e2.fd_tolerance(i)};
    });
}

ResidualSeries phase_diameter_residual(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                       const CertificateParameters& params, double coupling, TimeWindow window) {
    const double g = require_gamma(constants);
    const double n = static_cast<double>(constants.n);
    const double source = drift(constants, coupling);
    const double damping = coupling * constants.connectivity * std::cos(constants.alpha_bar) * std::sin(params.beta) /
                           (n * params.beta);
    const Series d(trajectory, [](const DiagnosticsFrame& f) { return f.d_theta; });
    return collect("D_theta second order", trajectory, window, [&](std::size_t i) {
        const double lhs = g * d.second(i) + d.first(i);
        return std::pair{lhs - (source - damping * d[i]), d.fd_tolerance(i)};
    });
}

ResidualSeries acceleration_diameter_residual(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                              double coupling, TimeWindow window) {
    const double g = require_gamma(constants);
    const double gain = 2.0 * coupling * constants.psi_u;
    const Series da(trajectory, [](const DiagnosticsFrame& f) { return f.d_a; });
    const Series dw(trajectory, [](const DiagnosticsFrame& f) { return f.d_omega; });
    return collect("D_a first order", trajectory, window, [&](std::size_t i) {
        return std::pair{g * da.first(i) + da[i] - gain * dw[i], g * da.fd_tolerance(i)};
    });
}

ResidualSeries frequency_diameter_residual(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                           double coupling, TimeWindow window) {
    const double g = require_gamma(constants);
    const double source = drift(constants, coupling);
    const double gain = 2.0 * coupling * constants.psi_u;
    const Series dw(trajectory, [](const DiagnosticsFrame& f) { return f.d_omega; });
    const Series dt(trajectory, [](const DiagnosticsFrame& f) { return f.d_theta; });
    return collect("D_omega first order", trajectory, window, [&](std::size_t i) {
        return std::pair{g * dw.first(i) + dw[i] - (source + gain * dt[i]), g * dw.fd_tolerance(i)};
    });
}

ResidualSeries frequency_second_order_residual(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                               const CertificateParameters& params, double coupling,
                                               TimeWindow window) {
    const double g = require_gamma(constants);
    const double damping = 4.0 * decay_rate(constants, coupling, params.d_infty);
    const Series dw(trajectory, [](const DiagnosticsFrame& f) { return f.d_omega; });
    return collect("D_omega second order", trajectory, window, [&](std::size_t i) {
        const double lhs = g * dw.second(i) + dw.first(i);
        return std::pair{lhs + damping * dw[i], dw.fd_tolerance(i)};
    });
}

ResidualSeries jerk_diameter_residual(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                      const CertificateParameters& params, double coupling, TimeWindow window) {
    const double g = require_gamma(constants);
    const double gain = 2.0 * coupling * constants.psi_u;
    const double m = mu(constants, coupling, params);
    const Series db(trajectory, [](const DiagnosticsFrame& f) { return f.d_b; });
    const Series da(trajectory, [](const DiagnosticsFrame& f) { return f.d_a; });
    const Series dw(trajectory, [](const DiagnosticsFrame& f) { return f.d_omega; });
    return collect("D_b first order", trajectory, window, [&](std::size_t i) {
        return std::pair{g * db.first(i) + db[i] - (gain * da[i] + (m / g) * dw[i]), g * db.fd_tolerance(i)};
    });
}

std::vector<ResidualSeries> residual_suite(const TrajectoryRecord& trajectory, const NetworkConstants& constants,
                                           const CertificateParameters& params, double coupling, double capture_time,
                                           double noise_floor) {
    double end = std::numeric_limits<double>::infinity();
    for (const auto& s : trajectory.samples) {
        if (s.frame.d_omega < noise_floor) {
            end = std::nextafter(s.frame.time, -std::numeric_limits<double>::infinity());
            break;
        }
    }
    const TimeWindow whole{-std::numeric_limits<double>::infinity(), end};
    const TimeWindow after{capture_time, end};
    std::vector<ResidualSeries> out;
    out.push_back(phase_diameter_residual(trajectory, constants, params, coupling, whole));
    out.push_back(acceleration_diameter_residual(trajectory, constants, coupling, whole));
    out.push_back(frequency_diameter_residual(trajectory, constants, coupling, whole));
    out.push_back(gronwall_residual_e1(trajectory, constants, params, coupling, whole));
    out.push_back(frequency_second_order_residual(trajectory, constants, params, coupling, after));
    out.push_back(jerk_diameter_residual(trajectory, constants, params, coupling, after));
    out.push_back(gronwall_residual_e2(trajectory, constants, params, coupling, after));
    return out;
}

DecayFit fit_log_linear_decay(std::span<const double> time, std::span<const double> value, double floor) {
    if (time.size() != value.size()) throw Error("fit_decay_rate: time/value length mismatch");
    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t i = 0; i < time.size(); ++i) {
        if (value[i] > floor) {
            t.push_back(time[i]);
            y.push_back(std::log(value[i]));
        }
    }
    if (t.size() < kMinFitSamples) {
        throw Error("fit_decay_rate: need at least " + std::to_string(kMinFitSamples) +
                    " samples above the floor, got " + std::to_string(t.size()));
    }
    const double count = static_cast<double>(t.size());
    double t_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        t_mean += t[i];
        y_mean += y[i];
    }
    t_mean /= count;
    y_mean /= count;
    double stt = 0.0;
    double sty = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double dt = t[i] - t_mean;
        const double dy = y[i] - y_mean;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (!(stt > 0.0)) throw Error("fit_decay_rate: samples span zero time");
    const double slope = sty / stt;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - (y_mean + slope * (t[i] - t_mean));
        ss_res += r * r;
    }
    DecayFit fit;
    fit.rate = slope == 0.0 ? 0.0 : -slope;
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.samples = t.size();
    return fit;
}

DecayFit fit_decay_rate(const TrajectoryRecord& trajectory, TimeWindow window, double floor) {
    std::vector<double> t;
    std::vector<double> v;
    for (const auto& s : trajectory.samples) {
        if (s.frame.time < window.begin || s.frame.time > window.end) continue;
        t.push_back(s.frame.time);
        v.push_back(s.frame.d_omega);
    }
    return fit_log_linear_decay(t, v, floor);
}

}  // namespace synccert
