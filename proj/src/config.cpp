#include "synccert/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace synccert {

namespace {

std::string at_line(const YAML::Node& node) {
    const auto mark = node.Mark();
    return mark.line >= 0 ? " (line " + std::to_string(mark.line + 1) + ")" : "";
}

/// Mapping reader that tracks which keys were consumed so leftovers can be rejected.
class Section {
  public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (!node_.IsMap()) fail("expected a mapping");
    }

    [[nodiscard]] const std::string& path() const { return path_; }
    [[nodiscard]] bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

    [[nodiscard]] YAML::Node take(const std::string& key) {
        seen_.insert(key);
        return node_[key];
    }
    [[nodiscard]] YAML::Node require(const std::string& key) {
        auto n = take(key);
        if (!n) fail("missing required key '" + key + "'");
        return n;
    }

    [[nodiscard]] std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) {
                throw ConfigError(child(key) + ": unknown key" + at_line(kv.first));
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + msg + at_line(node_));
    }

  private:
    YAML::Node node_;
    std::string path_;
    std::set<std::string> seen_;
};

[[noreturn]] void fail_at(const std::string& path, const YAML::Node& node, const std::string& msg) {
    throw ConfigError(path + ": " + msg + at_line(node));
}

double as_double(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) fail_at(path, node, "expected a number");
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        fail_at(path, node, "expected a number, got '" + node.Scalar() + "'");
    }
}

std::vector<double> as_vector(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) fail_at(path, node, "expected a sequence of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(as_double(node[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

SquareMatrix as_matrix(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) fail_at(path, node, "expected a sequence of rows");
    const std::size_t n = node.size();
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = as_vector(node[i], path + "[" + std::to_string(i) + "]");
        if (row.size() != n) fail_at(path + "[" + std::to_string(i) + "]", node[i], "matrix must be square");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = row[j];
    }
    return m;
}

Range as_range(const YAML::Node& node, const std::string& path) {
    const auto v = as_vector(node, path);
    if (v.size() != 2) fail_at(path, node, "expected [lo, hi]");
    if (!(v[0] <= v[1])) fail_at(path, node, "range must satisfy lo <= hi");
    return {v[0], v[1]};
}

std::int64_t as_int(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) fail_at(path, node, "expected an integer");
    try {
        return node.as<std::int64_t>();
    } catch (const YAML::Exception&) {
        fail_at(path, node, "expected an integer, got '" + node.Scalar() + "'");
    }
}

bool is_keyword(const YAML::Node& node, const char* word) { return node.IsScalar() && node.Scalar() == word; }

SquareMatrix uniform_offdiagonal(std::size_t n, double value) {
    SquareMatrix m(n, value);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
    return m;
}

OscillatorNetwork parse_inline_network(Section& s) {
    OscillatorNetwork net;
    net.damping = as_vector(s.require("damping"), s.child("damping"));
    const std::size_t n = net.damping.size();
    const bool has_inertia = s.has("inertia");
    const bool has_gamma = s.has("gamma");
    if (has_inertia == has_gamma) s.fail("exactly one of 'inertia' or 'gamma' is required");
    if (has_inertia) {
        net.inertia = as_vector(s.take("inertia"), s.child("inertia"));
    } else {
        const double g = as_double(s.take("gamma"), s.child("gamma"));
        if (!(g > 0.0)) s.fail("gamma must be positive");
        net.inertia.resize(n);
        for (std::size_t i = 0; i < n; ++i) net.inertia[i] = g * net.damping[i];
    }
    net.natural_frequency = as_vector(s.require("natural_frequency"), s.child("natural_frequency"));
    net.coupling = as_double(s.require("coupling"), s.child("coupling"));
    net.weights = as_matrix(s.require("weights"), s.child("weights"));
    const auto fr = s.require("frustration");
    net.frustration = fr.IsScalar() ? uniform_offdiagonal(n, as_double(fr, s.child("frustration")))
                                    : as_matrix(fr, s.child("frustration"));
    s.finish();

    const auto violations = validate(net);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + s.child(v.field) + ": " + v.message;
        throw ConfigError(msg);
    }
    return net;
}

GeneratedNetworkSpec parse_generated_network(Section& s) {
    GeneratedNetworkSpec g;
    const auto n = as_int(s.require("n"), s.child("n"));
    if (n < 1) s.fail("n must be >= 1");
    g.n = static_cast<std::size_t>(n);

    const auto pattern = s.take("pattern");
    if (pattern) {
        if (is_keyword(pattern, "all-to-all")) g.pattern = WeightPattern::AllToAll;
        else if (is_keyword(pattern, "random")) g.pattern = WeightPattern::Random;
        else if (is_keyword(pattern, "mask")) g.pattern = WeightPattern::Mask;
        else fail_at(s.child("pattern"), pattern, "expected one of all-to-all, random, mask");
    }
    if (const auto m = s.take("mask")) {
        if (g.pattern != WeightPattern::Mask) fail_at(s.child("mask"), m, "only valid with pattern: mask");
        g.mask = as_matrix(m, s.child("mask"));
        if (g.mask.size() != g.n) fail_at(s.child("mask"), m, "mask must be n x n");
    } else if (g.pattern == WeightPattern::Mask) {
        s.fail("pattern: mask requires 'mask'");
    }
    if (const auto p = s.take("edge_probability")) {
        g.edge_probability = as_double(p, s.child("edge_probability"));
        if (!(g.edge_probability >= 0.0 && g.edge_probability <= 1.0)) {
            fail_at(s.child("edge_probability"), p, "must lie in [0, 1]");
        }
    }
    if (const auto r = s.take("weight_range")) g.weight_range = as_range(r, s.child("weight_range"));
    if (!(g.weight_range.lo >= 0.0)) s.fail("weight_range must be nonnegative");
    if (const auto r = s.take("damping_range")) g.damping_range = as_range(r, s.child("damping_range"));
    if (!(g.damping_range.lo > 0.0)) s.fail("damping_range must be strictly positive");
    if (const auto r = s.take("natural_frequency_range")) {
        g.natural_frequency_range = as_range(r, s.child("natural_frequency_range"));
    }
    if (const auto v = s.take("gamma")) g.gamma = as_double(v, s.child("gamma"));
    if (!(g.gamma > 0.0)) s.fail("gamma must be positive");
    if (const auto v = s.take("frustration")) g.frustration = as_double(v, s.child("frustration"));
    if (!(g.frustration >= 0.0 && g.frustration < 1.5707963267948966)) s.fail("frustration must lie in [0, pi/2)");
    g.coupling = as_double(s.require("coupling"), s.child("coupling"));
    if (!(g.coupling >= 0.0)) s.fail("coupling must be nonnegative");
    s.finish();
    return g;
}

std::variant<OscillatorNetwork, GeneratedNetworkSpec> parse_network(Section s) {
    if (s.has("generate")) {
        Section g(s.take("generate"), s.child("generate"));
        s.finish();
        return parse_generated_network(g);
    }
    return parse_inline_network(s);
}

std::variant<EnsembleState, GeneratedInitialSpec> parse_initial(Section s) {
    if (s.has("generate")) {
        Section g(s.take("generate"), s.child("generate"));
        s.finish();
        GeneratedInitialSpec spec;
        if (const auto r = g.take("phase_range")) spec.phase_range = as_range(r, g.child("phase_range"));
        if (const auto r = g.take("frequency_range")) spec.frequency_range = as_range(r, g.child("frequency_range"));
        g.finish();
        return spec;
    }
    EnsembleState st;
    st.phase = as_vector(s.require("phase"), s.child("phase"));
    st.frequency = as_vector(s.require("frequency"), s.child("frequency"));
    s.finish();
    if (st.phase.size() != st.frequency.size()) s.fail("phase and frequency lengths differ");
    return st;
}

IntegrationSpec parse_integration(Section s) {
    IntegrationSpec spec;
    if (const auto dt = s.take("dt"); dt && !is_keyword(dt, "auto")) {
        spec.dt = as_double(dt, s.child("dt"));
        if (!(*spec.dt > 0.0)) fail_at(s.child("dt"), dt, "dt must be positive or 'auto'");
    }
    const auto h = s.require("horizon");
    spec.horizon = as_double(h, s.child("horizon"));
    if (!(spec.horizon > 0.0)) fail_at(s.child("horizon"), h, "horizon must be > 0");
    if (const auto st = s.take("stride")) {
        spec.stride = as_int(st, s.child("stride"));
        if (spec.stride < 1) fail_at(s.child("stride"), st, "stride >= 1 required");
    }
    s.finish();
    return spec;
}

CertificateSpec parse_certificate(const YAML::Node& node, const std::string& path) {
    CertificateSpec spec;
    if (is_keyword(node, "search")) return spec;
    Section s(node, path);
    if (const auto mode = s.take("mode"); mode && !is_keyword(mode, "search")) {
        fail_at(s.child("mode"), mode, "only 'search' is accepted");
    } else if (mode) {
        if (const auto g = s.take("grid")) {
            spec.search_grid = static_cast<int>(as_int(g, s.child("grid")));
            if (spec.search_grid < 2) fail_at(s.child("grid"), g, "grid resolution must be >= 2");
        }
        s.finish();
        return spec;
    }
    CertificateParameters p;
    p.beta = as_double(s.require("beta"), s.child("beta"));
    p.d_infty = as_double(s.require("d_infty"), s.child("d_infty"));
    s.finish();
    try {
        require_valid(p);
    } catch (const Error& e) {
        s.fail(e.what());
    }
    spec.fixed = p;
    return spec;
}

AnalysisSpec parse_analysis(Section s) {
    AnalysisSpec spec;
    if (const auto c = s.take("capture_threshold"); c && !is_keyword(c, "auto")) {
        spec.capture_threshold = as_double(c, s.child("capture_threshold"));
        if (!(*spec.capture_threshold > 0.0)) fail_at(s.child("capture_threshold"), c, "must be positive");
    }
    if (const auto f = s.take("fit_floor")) spec.fit_floor = as_double(f, s.child("fit_floor"));
    if (const auto f = s.take("residual_floor")) spec.residual_floor = as_double(f, s.child("residual_floor"));
    s.finish();
    return spec;
}

OutputSpec parse_outputs(Section s) {
    OutputSpec spec;
    if (const auto t = s.take("timeseries")) spec.timeseries = t.as<std::string>();
    if (const auto r = s.take("report")) spec.report = r.as<std::string>();
    s.finish();
    return spec;
}

std::size_t network_size(const std::variant<OscillatorNetwork, GeneratedNetworkSpec>& net) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, OscillatorNetwork>) return v.size();
            else return v.n;
        },
        net);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("syntax error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }
    if (!root || root.IsNull()) throw ConfigError("<root>: empty configuration");

    ExperimentConfig cfg;
    try {
        Section s(root, "");
        cfg.network = parse_network(Section(s.require("network"), "network"));
        cfg.initial = parse_initial(Section(s.require("initial"), "initial"));
        cfg.integration = parse_integration(Section(s.require("integration"), "integration"));
        if (const auto c = s.take("certificate")) cfg.certificate = parse_certificate(c, "certificate");
        if (const auto a = s.take("analysis")) cfg.analysis = parse_analysis(Section(a, "analysis"));
        if (const auto o = s.take("outputs")) cfg.outputs = parse_outputs(Section(o, "outputs"));
        if (const auto seed = s.take("seed")) {
            try {
                cfg.seed = seed.as<std::uint64_t>();
            } catch (const YAML::Exception&) {
                fail_at("seed", seed, "expected an unsigned 64-bit integer");
            }
        }
        s.finish();
    } catch (const YAML::Exception& e) {
        throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
    }

    if (const auto* st = std::get_if<EnsembleState>(&cfg.initial)) {
        if (st->phase.size() != network_size(cfg.network)) {
            throw ConfigError("initial.phase: length must equal the number of oscillators");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void emit_vector(YAML::Emitter& out, const std::vector<double>& v) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << shortest(x);
    out << YAML::EndSeq;
}

void emit_matrix(YAML::Emitter& out, const SquareMatrix& m) {
    out << YAML::BeginSeq;
    for (std::size_t i = 0; i < m.size(); ++i) emit_vector(out, std::vector<double>(m.row(i), m.row(i) + m.size()));
    out << YAML::EndSeq;
}

void emit_range(YAML::Emitter& out, const Range& r) { emit_vector(out, {r.lo, r.hi}); }

}  // namespace

std::string to_yaml(const ExperimentConfig& c) {
    YAML::Emitter out;
    out << YAML::BeginMap;

    out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
    if (const auto* net = std::get_if<OscillatorNetwork>(&c.network)) {
        out << YAML::Key << "inertia" << YAML::Value;
        emit_vector(out, net->inertia);
        out << YAML::Key << "damping" << YAML::Value;
        emit_vector(out, net->damping);
        out << YAML::Key << "natural_frequency" << YAML::Value;
        emit_vector(out, net->natural_frequency);
        out << YAML::Key << "coupling" << YAML::Value << shortest(net->coupling);
        out << YAML::Key << "weights" << YAML::Value;
        emit_matrix(out, net->weights);
        out << YAML::Key << "frustration" << YAML::Value;
        emit_matrix(out, net->frustration);
    } else {
        const auto& g = std::get<GeneratedNetworkSpec>(c.network);
        out << YAML::Key << "generate" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "n" << YAML::Value << g.n;
        out << YAML::Key << "pattern" << YAML::Value
            << (g.pattern == WeightPattern::AllToAll ? "all-to-all" : g.pattern == WeightPattern::Random ? "random" : "mask");
        if (g.pattern == WeightPattern::Mask) {
            out << YAML::Key << "mask" << YAML::Value;
            emit_matrix(out, g.mask);
        }
        out << YAML::Key << "edge_probability" << YAML::Value << shortest(g.edge_probability);
        out << YAML::Key << "weight_range" << YAML::Value;
        emit_range(out, g.weight_range);
        out << YAML::Key << "damping_range" << YAML::Value;
        emit_range(out, g.damping_range);
        out << YAML::Key << "natural_frequency_range" << YAML::Value;
        emit_range(out, g.natural_frequency_range);
        out << YAML::Key << "gamma" << YAML::Value << shortest(g.gamma);
        out << YAML::Key << "frustration" << YAML::Value << shortest(g.frustration);
        out << YAML::Key << "coupling" << YAML::Value << shortest(g.coupling);
        out << YAML::EndMap;
    }
    out << YAML::EndMap;

    out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
    if (const auto* st = std::get_if<EnsembleState>(&c.initial)) {
        out << YAML::Key << "phase" << YAML::Value;
        emit_vector(out, st->phase);
        out << YAML::Key << "frequency" << YAML::Value;
        emit_vector(out, st->frequency);
    } else {
        const auto& g = std::get<GeneratedInitialSpec>(c.initial);
        out << YAML::Key << "generate" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "phase_range" << YAML::Value;
        emit_range(out, g.phase_range);
        out << YAML::Key << "frequency_range" << YAML::Value;
        emit_range(out, g.frequency_range);
        out << YAML::EndMap;
    }
    out << YAML::EndMap;

    out << YAML::Key << "integration" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "dt" << YAML::Value << (c.integration.dt ? shortest(*c.integration.dt) : "auto");
    out << YAML::Key << "horizon" << YAML::Value << shortest(c.integration.horizon);
    out << YAML::Key << "stride" << YAML::Value << c.integration.stride;
    out << YAML::EndMap;

    out << YAML::Key << "certificate" << YAML::Value << YAML::BeginMap;
    if (c.certificate.fixed) {
        out << YAML::Key << "beta" << YAML::Value << shortest(c.certificate.fixed->beta);
        out << YAML::Key << "d_infty" << YAML::Value << shortest(c.certificate.fixed->d_infty);
    } else {
        out << YAML::Key << "mode" << YAML::Value << "search";
        out << YAML::Key << "grid" << YAML::Value << c.certificate.search_grid;
    }
    out << YAML::EndMap;

    out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "capture_threshold" << YAML::Value
        << (c.analysis.capture_threshold ? shortest(*c.analysis.capture_threshold) : "auto");
    out << YAML::Key << "fit_floor" << YAML::Value << shortest(c.analysis.fit_floor);
    out << YAML::Key << "residual_floor" << YAML::Value << shortest(c.analysis.residual_floor);
    out << YAML::EndMap;

    out << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "timeseries" << YAML::Value << c.outputs.timeseries;
    out << YAML::Key << "report" << YAML::Value << c.outputs.report;
    out << YAML::EndMap;

    out << YAML::Key << "seed" << YAML::Value << c.seed;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace synccert
