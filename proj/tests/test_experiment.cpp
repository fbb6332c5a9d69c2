#include "synccert/experiment.hpp"
#include "synccert/reference_instance.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace synccert;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("synccert-test-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream s(text);
    for (std::string line; std::getline(s, line);) out.push_back(line);
    return out;
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') out.push_back(cur), cur.clear();
        else cur += ch;
    }
    out.push_back(cur);
    return out;
}

ExperimentConfig short_reference(const fs::path& dir, double horizon = 0.02) {
    auto c = reference_config(dir.string());
    c.integration.horizon = horizon;
    return c;
}

ExperimentConfig zero_coupling(const fs::path& dir) {
    ExperimentConfig c;
    OscillatorNetwork net;
    net.inertia = {0.1, 0.1};
    net.damping = {1.0, 1.0};
    net.natural_frequency = {0.5, -0.5};
    net.coupling = 0.0;
    net.weights = SquareMatrix{{0, 1}, {1, 0}};
    net.frustration = SquareMatrix(2);
    c.network = net;
    c.initial = EnsembleState{0.0, {0.0, 0.5}, {0.0, 0.0}};
    c.integration.horizon = 1.0;
    c.integration.stride = 3;
    c.certificate.fixed = CertificateParameters{2.0, 0.5};
    c.outputs.timeseries = (dir / "ts.csv").string();
    c.outputs.report = (dir / "report.json").string();
    return c;
}

}  // namespace

TEST(Csv, Header) {
    EXPECT_EQ(timeseries_header(2), "t,theta_1,theta_2,omega_1,omega_2,D_theta,D_omega,D_a,D_b,E1,E2,envelope");
}

TEST(Csv, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1e-7), "1e-07");
    EXPECT_EQ(format_double(2.0), "2");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Run, ZeroCouplingFailsButSimulates) {
    const auto dir = scratch("zero");
    const auto cfg = zero_coupling(dir);
    const auto result = run(cfg);
    EXPECT_EQ(result.report.exit_code, kExitCertificateFailed);
    ASSERT_TRUE(result.report.certificate);
    EXPECT_FALSE(result.report.certificate->verdict);
    EXPECT_TRUE(result.report.simulated);
    EXPECT_DOUBLE_EQ(result.report.dt, 0.01);  // auto: gamma / 10
    const auto rows = lines(slurp(cfg.outputs.timeseries));
    // floor(1 / (0.01 * 3)) + 1 = 34 rows plus the header.
    ASSERT_EQ(rows.size(), 35u);
    EXPECT_EQ(rows[0], timeseries_header(2));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto f = fields(rows[r]);
        ASSERT_EQ(f.size(), 12u);
        EXPECT_FALSE(f[9].empty());   // E1 defined
        EXPECT_TRUE(f[11].empty());   // no envelope without a certificate
    }
    EXPECT_TRUE(fs::exists(cfg.outputs.report));
    EXPECT_FALSE(fs::exists(cfg.outputs.report + ".tmp"));
}

TEST(Run, ReferenceShortHorizon) {
    const auto dir = scratch("ref");
    const auto cfg = short_reference(dir);
    const auto result = run(cfg);
    const auto& r = result.report;
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_NEAR(r.constants.connectivity, 1.0089, 5e-4);
    ASSERT_TRUE(r.capture_time);
    EXPECT_LT(*r.capture_time, 0.02);
    ASSERT_TRUE(r.anchor_e2);
    EXPECT_EQ(r.samples, 20001u);
    EXPECT_EQ(r.generator, "mt19937_64/uniform53-open/v1");
    EXPECT_EQ(r.residuals.size(), 7u);

    const auto rows = lines(slurp(cfg.outputs.timeseries));
    ASSERT_EQ(rows.size(), 20002u);
    bool seen_envelope = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = fields(rows[i]);
        const double t = std::stod(f[0]);
        if (t < *r.capture_time) {
            EXPECT_TRUE(f.back().empty());
        } else {
            ASSERT_FALSE(f.back().empty());
            if (!seen_envelope) {
                EXPECT_EQ(std::stod(f.back()), *r.anchor_e2);
            }
            seen_envelope = true;
        }
    }
    EXPECT_TRUE(seen_envelope);
    const auto report = slurp(cfg.outputs.report);
    EXPECT_NE(report.find("\"verdict\": \"pass\""), std::string::npos);
    EXPECT_NE(report.find("\"config\": "), std::string::npos);
}

TEST(Run, ByteIdenticalReruns) {
    const auto a = scratch("det-a");
    const auto b = scratch("det-b");
    auto ca = short_reference(a, 0.005);
    auto cb = ca;
    cb.outputs.timeseries = (b / "reference_timeseries.csv").string();
    cb.outputs.report = (b / "reference_report.json").string();
    (void)run(ca);
    (void)run(cb);
    EXPECT_EQ(slurp(ca.outputs.timeseries), slurp(cb.outputs.timeseries));
    // Reports echo their own output paths; compare with paths normalized.
    auto ra = slurp(ca.outputs.report);
    auto rb = slurp(cb.outputs.report);
    for (std::string* s : {&ra, &rb}) {
        for (const auto& d : {a.string(), b.string()}) {
            for (auto pos = s->find(d); pos != std::string::npos; pos = s->find(d)) s->replace(pos, d.size(), "X");
        }
    }
    EXPECT_EQ(ra, rb);
    (void)run(ca);
    EXPECT_EQ(slurp(ca.outputs.timeseries), slurp(cb.outputs.timeseries));
}

TEST(Run, SearchedCertificate) {
    auto cfg = short_reference(scratch("search"), 0.002);
    cfg.certificate.fixed.reset();
    cfg.certificate.search_grid = 16;
    cfg.outputs = {};
    const auto r = run(cfg).report;
    EXPECT_TRUE(r.certificate_searched);
    ASSERT_TRUE(r.certificate);
    EXPECT_TRUE(r.certificate->verdict);
}

TEST(Certify, NoSimulation) {
    const auto r = evaluate_certificate(reference_config(""));
    EXPECT_FALSE(r.simulated);
    EXPECT_EQ(r.exit_code, kExitOk);
    EXPECT_EQ(r.samples, 0u);
    EXPECT_NEAR(r.certificate->mu, 24.29, 0.05);
}

TEST(Sweep, SingleCouplingEqualsRun) {
    auto base = short_reference(scratch("single"), 0.002);
    base.outputs = {};
    const auto entries = sweep(base, SweepAxis::Coupling, {780.0});
    ASSERT_EQ(entries.size(), 1u);
    ASSERT_TRUE(entries[0].report);
    EXPECT_EQ(report_json(*entries[0].report), report_json(run(base).report));
}

TEST(Sweep, CouplingBoundary) {
    const auto dir = scratch("boundary");
    const auto entries = sweep(short_reference(dir, 0.002), SweepAxis::Coupling, {700.0, 780.0}, 2);
    ASSERT_EQ(entries.size(), 2u);
    EXPECT_EQ(entries[0].exit_code, kExitCertificateFailed);
    EXPECT_FALSE(entries[0].report->certificate->a2_k[1].pass);
    EXPECT_EQ(entries[1].exit_code, kExitOk);
    EXPECT_TRUE(fs::exists(dir / "reference_report-0.json"));
    EXPECT_TRUE(fs::exists(dir / "reference_timeseries-1.csv"));
}

TEST(Sweep, GammaScaleAdjustsStep) {
    auto base = reference_config("");
    base.integration.dt.reset();
    base.integration.horizon = 2e-10;
    const std::vector<double> scales{1e-6, 1e-5, 1e-4};
    const auto entries = sweep(base, SweepAxis::GammaScale, scales);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        ASSERT_TRUE(entries[i].report) << entries[i].error;
        const auto& r = *entries[i].report;
        EXPECT_TRUE(r.certificate->verdict) << i;
        EXPECT_NEAR(r.dt, 1e-6 * scales[i] / 10.0, 1e-25);
        EXPECT_NEAR(*r.constants.gamma, 1e-6 * scales[i], 1e-20);
    }
}

TEST(Sweep, FrustrationAndSeedAxes) {
    auto base = reference_config("");
    base.integration.horizon = 1e-6;
    const auto fr = sweep(base, SweepAxis::Frustration, {0.0, 0.01});
    EXPECT_EQ(fr[0].report->constants.alpha_bar, 0.0);
    EXPECT_EQ(fr[1].report->constants.alpha_bar, 0.01);
    const auto cfg = apply_sweep_value(base, SweepAxis::Seed, 12345.0, 0);
    EXPECT_EQ(cfg.seed, 12345u);
    EXPECT_THROW((void)apply_sweep_value(base, SweepAxis::Seed, 1.5, 0), Error);
}

TEST(Sweep, ErrorsAreRecorded) {
    auto base = reference_config("");
    base.integration.dt = 1e-2;  // far beyond the stiffness limit
    base.integration.horizon = 10.0;
    const auto entries = sweep(base, SweepAxis::Coupling, {780.0, -1.0});
    ASSERT_EQ(entries.size(), 2u);
    for (const auto& e : entries) {
        EXPECT_EQ(e.exit_code, kExitHardError);
        EXPECT_FALSE(e.error.empty());
        EXPECT_FALSE(e.report.has_value());
    }
    EXPECT_NE(entries[0].error.find("blow-up"), std::string::npos);
}

TEST(Sweep, SeedsBitIdenticalOnRerun) {
    ExperimentConfig base;
    GeneratedNetworkSpec spec;
    spec.n = 5;
    spec.gamma = 1e-2;
    spec.coupling = 30.0;
    base.network = spec;
    base.initial = GeneratedInitialSpec{{0.0, 1.0}, {-0.1, 0.1}};
    base.integration.horizon = 0.5;
    base.integration.stride = 5;
    base.certificate.search_grid = 8;
    std::vector<double> seeds(16);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = static_cast<double>(i + 1);
    const auto first = sweep(base, SweepAxis::Seed, seeds, 4);
    const auto second = sweep(base, SweepAxis::Seed, seeds, 3);
    ASSERT_EQ(first.size(), 16u);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        ASSERT_TRUE(first[i].report) << first[i].error;
        EXPECT_EQ(report_json(*first[i].report), report_json(*second[i].report));
    }
    EXPECT_NE(report_json(*first[0].report), report_json(*first[1].report));
}

TEST(Sweep, AxisNames) {
    EXPECT_EQ(parse_sweep_axis("gamma-scale"), SweepAxis::GammaScale);
    EXPECT_EQ(to_string(SweepAxis::Seed), "seed");
    EXPECT_THROW((void)parse_sweep_axis("mass"), Error);
}
