#include "synccert/error.hpp"
#include "synccert/experiment.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace {

struct Overrides {
    std::optional<double> dt;
    std::optional<double> horizon;
    std::optional<std::uint64_t> seed;

    void apply(synccert::ExperimentConfig& c) const {
        if (dt) {
            if (!(*dt > 0.0) || !std::isfinite(*dt)) throw synccert::ConfigError("--dt: must be positive");
            c.integration.dt = *dt;
        }
        if (horizon) {
            if (!(*horizon > 0.0) || !std::isfinite(*horizon)) throw synccert::ConfigError("--horizon: must be positive");
            c.integration.horizon = *horizon;
        }
        if (seed) c.seed = *seed;
    }
};

std::string fmt(double v) { return synccert::format_double(v); }

void print_summary(const synccert::SummaryReport& r, std::ostream& os) {
    const auto& c = r.constants;
    os << "constants: N=" << c.n << " C=" << fmt(c.connectivity) << " psi_u=" << fmt(c.psi_u)
       << " D_Omega=" << fmt(c.d_omega) << " alpha_bar=" << fmt(c.alpha_bar)
       << " gamma=" << (c.gamma ? fmt(*c.gamma) : std::string("undefined")) << "\n";
    os << "initial: D_theta=" << fmt(r.initial_frame.d_theta) << " D_omega=" << fmt(r.initial_frame.d_omega) << "\n";
    if (r.certificate) {
        const auto& cert = *r.certificate;
        os << "certificate" << (r.certificate_searched ? " (searched)" : "") << ": beta=" << fmt(cert.params.beta)
           << " d_infty=" << fmt(cert.params.d_infty) << " verdict=" << (cert.verdict ? "pass" : "fail")
           << (cert.fragile ? " (fragile)" : "") << "\n";
        os << "  mu=" << fmt(cert.mu) << " rate=" << fmt(cert.rate) << " t*<=" << fmt(cert.t_star_bound)
           << " omega_bound=" << fmt(cert.omega_bound) << (cert.verdict ? "" : " [not certified]") << "\n";
        auto show = [&os](const synccert::Inequality& q) {
            if (!q.pass) os << "  failed: " << q.name << " (lhs " << fmt(q.lhs) << ", bound " << fmt(q.bound) << ")\n";
        };
        show(cert.a1);
        show(cert.a2_frustration);
        for (const auto& q : cert.a2_gamma_k) show(q);
        for (const auto& q : cert.a2_k) show(q);
    } else {
        os << "certificate: none found\n";
    }
    if (r.simulated) {
        os << "simulation: dt=" << fmt(r.dt) << " samples=" << r.samples << " capture(" << fmt(r.capture_threshold)
           << ")=" << (r.capture_time ? fmt(*r.capture_time) : std::string("none")) << "\n";
        if (r.fit) {
            os << "  fitted rate=" << fmt(r.fit->rate) << " r2=" << fmt(r.fit->r_squared) << "\n";
        } else if (!r.fit_note.empty()) {
            os << "  fit: " << r.fit_note << "\n";
        }
        os << "  final: D_theta=" << fmt(r.final_frame.d_theta) << " D_omega=" << fmt(r.final_frame.d_omega) << "\n";
        for (const auto& s : r.residuals) {
            os << "  residual " << s.name << ": " << fmt(s.pass_fraction) << " of " << s.samples << "\n";
        }
    }
    for (const auto& w : r.warnings) os << "warning: " << w << "\n";
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw synccert::ConfigError("--values: cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw synccert::ConfigError("--values: empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified synchronization of inertial Kuramoto networks"};
    app.set_version_flag("--version", std::string(SYNCCERT_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    Overrides ov;
    app.add_option("--dt", ov.dt, "Override the integration step");
    app.add_option("--horizon", ov.horizon, "Override the integration horizon");
    app.add_option("--seed", ov.seed, "Override the generator seed");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Certify, simulate and analyse one configuration");
    run_cmd->add_option("config", config_path, "YAML configuration")->required();

    std::string out_dir = "out";
    auto* repro_cmd = app.add_subcommand("repro-paper", "Run the four-oscillator reference scenario");
    repro_cmd->add_option("--out", out_dir, "Output directory");

    std::string axis;
    std::string values;
    unsigned threads = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a configuration over a list of parameter values");
    sweep_cmd->add_option("config", config_path, "YAML configuration")->required();
    sweep_cmd->add_option("--axis", axis, "coupling | gamma-scale | frustration | seed")->required();
    sweep_cmd->add_option("--values", values, "Comma-separated values")->required();
    sweep_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* certify_cmd = app.add_subcommand("certify", "Constants and certificate only");
    certify_cmd->add_option("config", config_path, "YAML configuration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*repro_cmd) {
            auto config = synccert::reference_config(out_dir);
            ov.apply(config);
            const auto result = synccert::run(config);
            print_summary(result.report, std::cout);
            std::cout << "wrote " << config.outputs.timeseries << " and " << config.outputs.report << "\n";
            return result.report.exit_code;
        }
        auto config = synccert::load_config(config_path);
        ov.apply(config);
        if (*run_cmd) {
            const auto result = synccert::run(config);
            print_summary(result.report, std::cout);
            return result.report.exit_code;
        }
        if (*certify_cmd) {
            const auto report = synccert::evaluate_certificate(config);
            print_summary(report, std::cout);
            return report.exit_code;
        }
        if (*sweep_cmd) {
            const auto ax = synccert::parse_sweep_axis(axis);
            const auto entries = synccert::sweep(config, ax, parse_values(values), threads);
            bool hard = false;
            bool failed = false;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const auto& e = entries[i];
                std::cout << "[" << i << "] " << synccert::to_string(ax) << "=" << fmt(e.value) << " exit=" << e.exit_code;
                if (e.report && e.report->certificate) {
                    std::cout << " verdict=" << (e.report->certificate->verdict ? "pass" : "fail");
                }
                if (!e.error.empty()) std::cout << " error: " << e.error;
                std::cout << "\n";
                hard |= e.exit_code == synccert::kExitHardError;
                failed |= e.exit_code == synccert::kExitCertificateFailed;
            }
            return hard ? synccert::kExitHardError : failed ? synccert::kExitCertificateFailed : synccert::kExitOk;
        }
    } catch (const synccert::BlowUpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return synccert::kExitHardError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return synccert::kExitHardError;
    }
    return synccert::kExitHardError;
}
