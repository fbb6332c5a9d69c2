#include "synccert/experiment.hpp"

#include "synccert/error.hpp"
#include "synccert/generate.hpp"
#include "synccert/reference_instance.hpp"

#include "json.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#ifndef SYNCCERT_VERSION
#define SYNCCERT_VERSION "0.0.0"
#endif

namespace synccert {
namespace {

using Json = nlohmann::ordered_json;

struct Prepared {
    OscillatorNetwork network;
    EnsembleState initial;
    NetworkConstants constants;
    DiagnosticsFrame initial_frame;
    std::optional<EnergyCoefficients> energies;
    SummaryReport report;
};

bool energies_available(const NetworkConstants& c) {
    return c.gamma.has_value() && c.connectivity > 0.0 && c.psi_u > 0.0;
}

// Shared front half of run() and evaluate_certificate().
Prepared prepare(const ExperimentConfig& config) {
    Prepared p;
    auto [network, initial] = generate_instance(config);
    require_valid(network);
    require_valid_state(network, initial);
    p.network = std::move(network);
    p.initial = std::move(initial);
    p.constants = compute_constants(p.network);

    auto& r = p.report;
    r.version = SYNCCERT_VERSION;
    r.generator = kGeneratorId;
    r.integrator = "rk4-classical";
    r.constants = p.constants;
    r.config_echo = to_yaml(config);

    const DiagnosticsFrame bare = make_frame(p.network, p.initial);
    std::optional<CertificateParameters> params = config.certificate.fixed;
    if (params) {
        require_valid(*params);
    } else {
        r.certificate_searched = true;
        if (energies_available(p.constants)) {
            params = search_certificate_params(p.constants, p.network.coupling, bare.d_theta, bare.d_omega,
                                               config.certificate.search_grid);
        }
        if (!params) r.warnings.push_back("certificate search found no admissible (beta, d_infty)");
    }

    if (params && energies_available(p.constants)) p.energies = EnergyCoefficients::make(p.constants, *params);
    p.initial_frame = make_frame(p.network, p.initial, p.energies);
    r.initial_frame = p.initial_frame;
    r.final_frame = p.initial_frame;

    if (params) {
        r.certificate = certify(p.constants, p.network.coupling, bare.d_theta, bare.d_omega, *params,
                                p.initial_frame.e1);
    }
    const bool pass = r.certificate && r.certificate->verdict;
    r.exit_code = pass ? kExitOk : kExitCertificateFailed;
    return p;
}

ExperimentConfig suffixed(ExperimentConfig c, std::size_t index) {
    auto add = [index](std::string& path) {
        if (path.empty()) return;
        std::filesystem::path fp(path);
        const std::string name = fp.stem().string() + "-" + std::to_string(index) + fp.extension().string();
        path = (fp.parent_path() / name).string();
    };
    add(c.outputs.timeseries);
    add(c.outputs.report);
    return c;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

void append_optional(std::string& out, const std::optional<double>& v) {
    if (v && std::isfinite(*v)) append_double(out, *v);
}

Json to_json(const Inequality& q) {
    return Json{{"name", q.name},
                {"lhs", q.lhs},
                {"bound", q.bound},
                {"sense", q.sense == Inequality::Sense::Below ? "below" : "above"},
                {"pass", q.pass},
                {"fragile", q.fragile}};
}

Json optional_json(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json to_json(const DiagnosticsFrame& f) {
    return Json{{"t", f.time},           {"D_theta", f.d_theta}, {"D_omega", f.d_omega}, {"D_a", f.d_a},
                {"D_b", f.d_b},          {"E1", optional_json(f.e1)}, {"E2", optional_json(f.e2)}};
}

Json to_json(const NetworkConstants& c) {
    return Json{{"n", c.n},
                {"connectivity", c.connectivity},
                {"psi_u", c.psi_u},
                {"D_Omega", c.d_omega},
                {"alpha_bar", c.alpha_bar},
                {"gamma", optional_json(c.gamma)}};
}

Json to_json(const CertificateReport& r) {
    Json gk = Json::array();
    for (const auto& q : r.a2_gamma_k) gk.push_back(to_json(q));
    Json k = Json::array();
    for (const auto& q : r.a2_k) k.push_back(to_json(q));
    return Json{{"beta", r.params.beta},
                {"d_infty", r.params.d_infty},
                {"gamma_defined", r.gamma_defined},
                {"connectivity_positive", r.connectivity_positive},
                {"a1", to_json(r.a1)},
                {"a2_frustration", to_json(r.a2_frustration)},
                {"a2_gamma_k", gk},
                {"a2_k", k},
                {"mu", r.mu},
                {"t_star_bound", r.t_star_bound},
                {"omega_bound", r.omega_bound},
                {"rate", r.rate},
                {"E1_initial", optional_json(r.e1_initial)},
                {"verdict", r.verdict ? "pass" : "fail"},
                {"fragile", r.fragile}};
}

}  // namespace

std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

double effective_time_step(const ExperimentConfig& config, const OscillatorNetwork& network) {
    return config.integration.dt ? *config.integration.dt : default_time_step(network);
}

SummaryReport evaluate_certificate(const ExperimentConfig& config) {
    return prepare(config).report;
}

RunResult run(const ExperimentConfig& config) {
    Prepared p = prepare(config);
    SummaryReport& r = p.report;

    SimulationOptions opts;
    opts.dt = effective_time_step(config, p.network);
    opts.horizon = config.integration.horizon;
    opts.stride = config.integration.stride;
    opts.energies = p.energies;
    TrajectoryRecord traj = simulate(p.network, p.initial, opts);

    r.simulated = true;
    r.dt = opts.dt;
    r.stride = opts.stride;
    r.samples = traj.samples.size();
    r.integrator = traj.integrator;
    r.warnings.insert(r.warnings.end(), traj.warnings.begin(), traj.warnings.end());
    r.final_frame = traj.samples.back().frame;
    r.residual_floor = config.analysis.residual_floor;

    r.capture_threshold = config.analysis.capture_threshold ? *config.analysis.capture_threshold
                          : r.certificate                   ? r.certificate->params.d_infty
                                                            : 0.1;
    const auto anchor = capture_index(traj, r.capture_threshold);
    if (anchor) {
        r.capture_time = traj.samples[*anchor].frame.time;
        r.anchor_e2 = traj.samples[*anchor].frame.e2;
        try {
            r.fit = fit_decay_rate(traj, TimeWindow{*r.capture_time}, config.analysis.fit_floor);
        } catch (const Error& e) {
            r.fit_note = e.what();
        }
    } else {
        r.fit_note = "no capture observed within the horizon";
    }

    // The differential inequalities presuppose the certificate; skip them otherwise.
    if (r.certificate && r.certificate->verdict && p.energies) {
        const double from = r.capture_time.value_or(std::numeric_limits<double>::infinity());
        try {
            for (const auto& s : residual_suite(traj, p.constants, r.certificate->params, p.network.coupling, from,
                                                config.analysis.residual_floor)) {
                r.residuals.push_back({s.name, s.size(), s.pass_fraction(), s.size() ? s.max_residual() : 0.0});
            }
        } catch (const Error& e) {
            r.warnings.push_back(std::string("residual checks skipped: ") + e.what());
        }
    }

    if (!config.outputs.timeseries.empty()) write_timeseries(config.outputs.timeseries, traj, r);
    if (!config.outputs.report.empty()) write_file_atomically(config.outputs.report, report_json(r));
    return RunResult{std::move(r), std::move(traj)};
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "coupling") return SweepAxis::Coupling;
    if (name == "gamma-scale") return SweepAxis::GammaScale;
    if (name == "frustration") return SweepAxis::Frustration;
    if (name == "seed") return SweepAxis::Seed;
    throw Error("unknown sweep axis '" + name + "' (expected coupling, gamma-scale, frustration or seed)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Coupling: return "coupling";
        case SweepAxis::GammaScale: return "gamma-scale";
        case SweepAxis::Frustration: return "frustration";
        case SweepAxis::Seed: return "seed";
    }
    return "?";
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base, SweepAxis axis, double value, std::size_t index) {
    ExperimentConfig c = suffixed(base, index);
    auto* inline_net = std::get_if<OscillatorNetwork>(&c.network);
    auto* generated = std::get_if<GeneratedNetworkSpec>(&c.network);
    switch (axis) {
        case SweepAxis::Coupling:
            if (inline_net) inline_net->coupling = value;
            else generated->coupling = value;
            break;
        case SweepAxis::GammaScale:
            if (!(value > 0.0) || !std::isfinite(value)) throw Error("gamma-scale values must be positive");
            if (inline_net) {
                for (double& m : inline_net->inertia) m *= value;
            } else {
                generated->gamma *= value;
            }
            break;
        case SweepAxis::Frustration:
            if (inline_net) {
                const std::size_t n = inline_net->size();
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) inline_net->frustration(i, j) = i == j ? 0.0 : value;
            } else {
                generated->frustration = value;
            }
            break;
        case SweepAxis::Seed:
            if (!(value >= 0.0) || value != std::floor(value) || value > 0x1.0p53)
                throw Error("seed values must be integers in [0, 2^53]");
            c.seed = static_cast<std::uint64_t>(value);
            break;
    }
    return c;
}

std::vector<SweepEntry> sweep(const ExperimentConfig& base, SweepAxis axis, const std::vector<double>& values,
                              unsigned threads) {
    std::vector<SweepEntry> out(values.size());
    if (values.empty()) return out;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, values.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            SweepEntry& e = out[i];
            e.value = values[i];
            try {
                auto result = run(apply_sweep_value(base, axis, values[i], i));
                e.exit_code = result.report.exit_code;
                e.report = std::move(result.report);
            } catch (const std::exception& ex) {
                e.error = ex.what();
                e.exit_code = kExitHardError;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

ExperimentConfig reference_config(const std::string& out_dir) {
    ExperimentConfig c;
    c.network = reference::four_node_network();
    c.initial = reference::four_node_initial_state();
    c.integration.dt = 1e-7;
    c.integration.horizon = 0.2;
    c.integration.stride = 10;
    c.certificate.fixed = reference::four_node_certificate();
    c.analysis.capture_threshold = 0.1;
    if (!out_dir.empty()) {
        c.outputs.timeseries = (std::filesystem::path(out_dir) / "reference_timeseries.csv").string();
        c.outputs.report = (std::filesystem::path(out_dir) / "reference_report.json").string();
    }
    return c;
}

std::string timeseries_header(std::size_t n) {
    std::string h = "t";
    for (std::size_t i = 1; i <= n; ++i) h += ",theta_" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) h += ",omega_" + std::to_string(i);
    h += ",D_theta,D_omega,D_a,D_b,E1,E2,envelope";
    return h;
}

void write_timeseries(const std::string& path, const TrajectoryRecord& trajectory, const SummaryReport& report) {
    const bool with_envelope =
        report.certificate && report.certificate->verdict && report.capture_time && report.anchor_e2;
    const std::size_t n = trajectory.network.size();
    std::string out = timeseries_header(n);
    out += '\n';
    out.reserve(trajectory.samples.size() * (2 * n + 8) * 24);
    for (const auto& s : trajectory.samples) {
        const auto& f = s.frame;
        append_double(out, f.time);
        for (double v : s.state.phase) out += ',', append_double(out, v);
        for (double v : s.state.frequency) out += ',', append_double(out, v);
        for (double v : {f.d_theta, f.d_omega, f.d_a, f.d_b}) out += ',', append_double(out, v);
        out += ',';
        append_optional(out, f.e1);
        out += ',';
        append_optional(out, f.e2);
        out += ',';
        if (with_envelope && f.time >= *report.capture_time)
            append_double(out, envelope(*report.certificate, *report.capture_time, *report.anchor_e2, f.time));
        out += '\n';
    }
    write_file_atomically(path, out);
}

std::string report_json(const SummaryReport& r) {
    Json j;
    j["version"] = r.version;
    j["generator"] = r.generator;
    j["integrator"] = r.integrator;
    j["exit_code"] = r.exit_code;
    j["constants"] = to_json(r.constants);
    j["certificate_searched"] = r.certificate_searched;
    j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
    j["simulated"] = r.simulated;
    if (r.simulated) {
        j["dt"] = r.dt;
        j["stride"] = r.stride;
        j["samples"] = r.samples;
        j["capture_threshold"] = r.capture_threshold;
        j["capture_time"] = optional_json(r.capture_time);
        j["anchor_E2"] = optional_json(r.anchor_e2);
        if (r.fit) {
            j["fit"] = Json{{"rate", r.fit->rate}, {"r_squared", r.fit->r_squared}, {"samples", r.fit->samples}};
        } else {
            j["fit"] = nullptr;
        }
        if (!r.fit_note.empty()) j["fit_note"] = r.fit_note;
        j["residual_floor"] = r.residual_floor;
        Json res = Json::array();
        for (const auto& s : r.residuals) {
            res.push_back(Json{{"name", s.name},
                               {"samples", s.samples},
                               {"pass_fraction", s.pass_fraction},
                               {"max_residual", s.max_residual}});
        }
        j["residuals"] = res;
    }
    j["initial"] = to_json(r.initial_frame);
    j["final"] = to_json(r.final_frame);
    j["warnings"] = r.warnings;
    j["config"] = r.config_echo;
    return j.dump(2) + "\n";
}

void write_file_atomically(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + target.parent_path().string() + ": " + ec.message());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) throw Error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
    }
}

}  // namespace synccert
