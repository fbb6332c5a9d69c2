// Randomized property checks with seeded hand-rolled generators.
#include "synccert/certifier.hpp"
#include "synccert/diagnostics.hpp"
#include "synccert/dynamics.hpp"
#include "synccert/network.hpp"
#include "synccert/trajectory.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace synccert;
using testing_support::Gen;
using testing_support::permuted;
using testing_support::rel_diff;

namespace {
constexpr int kTrials = 100;
}

TEST(NetworkProperty, ScalingCovariance) {
    Gen g(101);
    for (int t = 0; t < kTrials; ++t) {
        auto net = g.network(g.index(2, 8), 0.1, 1.0);
        const auto before = compute_constants(net);
        const double lambda = g.uniform(0.1, 10.0);
        for (auto& d : net.damping) d *= lambda;
        for (auto& m : net.inertia) m *= lambda;
        for (std::size_t i = 0; i < net.size(); ++i)
            for (std::size_t j = 0; j < net.size(); ++j) net.weights(i, j) *= lambda;
        const auto after = compute_constants(net);
        EXPECT_LT(rel_diff(before.connectivity, after.connectivity), 1e-14);
        EXPECT_LT(rel_diff(before.psi_u, after.psi_u), 1e-14);
    }
}

TEST(NetworkProperty, PermutationInvariance) {
    Gen g(102);
    for (int t = 0; t < kTrials; ++t) {
        const auto net = g.network(g.index(2, 8), 0.1, 1.0);
        const auto p = g.permutation(net.size());
        const auto a = compute_constants(net);
        const auto b = compute_constants(permuted(net, p));
        EXPECT_LT(rel_diff(a.connectivity, b.connectivity), 1e-14);
        EXPECT_EQ(a.psi_u, b.psi_u);
        EXPECT_EQ(a.d_omega, b.d_omega);
        EXPECT_EQ(a.alpha_bar, b.alpha_bar);
        EXPECT_EQ(a.gamma.has_value(), b.gamma.has_value());
    }
}

TEST(NetworkProperty, MonotoneInWeights) {
    Gen g(103);
    for (int t = 0; t < kTrials; ++t) {
        auto net = g.network(g.index(2, 8), 0.1, 1.0, 0.5);
        const auto before = compute_constants(net);
        const std::size_t n = net.size();
        const std::size_t i = g.index(0, n - 1);
        std::size_t j = g.index(0, n - 2);
        if (j >= i) ++j;
        net.weights(i, j) += g.uniform(0.0, 2.0);
        const auto after = compute_constants(net);
        EXPECT_GE(after.connectivity, before.connectivity);
        EXPECT_GE(after.psi_u, before.psi_u);
    }
}

TEST(DiagnosticsProperty, DiameterInvariance) {
    Gen g(104);
    for (int t = 0; t < kTrials; ++t) {
        const auto v = g.vec(g.index(1, 20), -5, 5);
        const double d = diameter(v);
        auto shifted = v;
        const double c = g.uniform(-100, 100);
        for (auto& x : shifted) x += c;
        EXPECT_NEAR(diameter(shifted), d, 1e-12);
        EXPECT_EQ(diameter(permuted(v, g.permutation(v.size()))), d);
        EXPECT_GE(d, 0.0);
    }
}

TEST(DiagnosticsProperty, EnergyLinearity) {
    Gen g(105);
    for (int t = 0; t < kTrials; ++t) {
        const auto net = g.network(g.index(2, 6), g.uniform(1e-6, 0.1), 5.0, 1.0);
        const auto c = compute_constants(net);
        const CertificateParameters p{g.uniform(0.5, 3.0), g.uniform(0.01, 0.4)};
        const auto k = EnergyCoefficients::make(c, p);
        const double x = g.uniform(0, 3), y = g.uniform(0, 3), z = g.uniform(0, 3);
        EXPECT_NEAR(energy_e1(c, p, x, y, z), x + y * energy_e1(c, p, 0, 1, 0) + z * energy_e1(c, p, 0, 0, 1),
                    1e-13 * (1 + energy_e1(c, p, x, y, z)));
        EXPECT_NEAR(energy_e2(c, p, x, y, z), x + y * k.omega_a + z * k.omega_b, 1e-13 * (1 + x));
    }
}

TEST(DynamicsProperty, RotationInvariance) {
    Gen g(106);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = g.index(2, 6);
        const auto net = g.network(n, 0.1, g.uniform(0.5, 5.0));
        auto s = g.state(n);
        auto r = s;
        const double c = g.uniform(-3, 3);
        for (auto& x : r.phase) x += c;
        Rk4Stepper a(net), b(net);
        for (int step = 0; step < 200; ++step) {
            ASSERT_TRUE(a.step(s.phase, s.frequency, 0.01));
            ASSERT_TRUE(b.step(r.phase, r.frequency, 0.01));
        }
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(r.phase[i] - c, s.phase[i], 1e-12 * (std::abs(s.phase[i]) + std::abs(c)) * 200);
            EXPECT_NEAR(r.frequency[i], s.frequency[i], 1e-12 * 200 * (1 + std::abs(s.frequency[i])));
        }
    }
}

TEST(DynamicsProperty, PermutationEquivariance) {
    Gen g(107);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = g.index(2, 6);
        const auto net = g.network(n, 0.1, 2.0);
        const auto s = g.state(n);
        const auto p = g.permutation(n);
        const SimulationOptions opts{0.01, 0.5, 5, std::nullopt};
        const auto a = simulate(net, s, opts);
        const auto b = simulate(permuted(net, p), EnsembleState{0.0, permuted(s.phase, p), permuted(s.frequency, p)},
                                opts);
        ASSERT_EQ(a.samples.size(), b.samples.size());
        for (std::size_t k = 0; k < a.samples.size(); ++k) {
            const auto ph = permuted(a.samples[k].state.phase, p);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(ph[i], b.samples[k].state.phase[i], 1e-12);
            }
            EXPECT_NEAR(a.samples[k].frame.d_omega, b.samples[k].frame.d_omega, 1e-12);
        }
    }
}

TEST(DynamicsProperty, IdenticalOscillatorsStayIdentical) {
    Gen g(108);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = g.index(2, 6);
        auto net = g.network(n, 0.05, g.uniform(0.5, 5.0), 0.8, 0.0);
        const double d = g.uniform(0.5, 1.5);
        const double w = g.uniform(-1, 1);
        net.damping.assign(n, d);
        net.inertia.assign(n, 0.05 * d);
        net.natural_frequency.assign(n, w);
        EnsembleState s{0.0, std::vector<double>(n, g.uniform(0, 6)), std::vector<double>(n, g.uniform(-1, 1))};
        Rk4Stepper stepper(net);
        for (int step = 0; step < 500; ++step) {
            ASSERT_TRUE(stepper.step(s.phase, s.frequency, 0.005));
            for (std::size_t i = 1; i < n; ++i) {
                ASSERT_EQ(s.phase[i], s.phase[0]);
                ASSERT_EQ(s.frequency[i], s.frequency[0]);
            }
        }
    }
}

TEST(DynamicsProperty, JerkMatchesFiniteDifference) {
    Gen g(109);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = g.index(2, 6);
        const auto net = g.network(n, 0.1, g.uniform(0.5, 3.0));
        const auto traj = simulate(net, g.state(n), {1e-3, 0.05, 1, std::nullopt});
        const std::size_t k = g.index(1, traj.samples.size() - 2);
        const auto am = acceleration(net, traj.samples[k - 1].state);
        const auto ap = acceleration(net, traj.samples[k + 1].state);
        const auto b = jerk(net, traj.samples[k].state);
        double scale = 0.0;
        for (double x : b) scale = std::max(scale, std::abs(x));
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR((ap[i] - am[i]) / 2e-3, b[i], 1e-3 * (1 + scale));
    }
}

TEST(CertifierProperty, DeterministicAndConsistent) {
    Gen g(110);
    for (int t = 0; t < kTrials; ++t) {
        const auto net = g.network(g.index(2, 6), g.uniform(1e-7, 1e-3), g.uniform(1, 1000), 1.0, 1e-3);
        const auto c = compute_constants(net);
        const CertificateParameters p{g.uniform(0.5, 3.0), g.uniform(0.01, 0.4)};
        const double dt0 = g.uniform(0, 2), dw0 = g.uniform(0, 1);
        const auto a = certify(c, net.coupling, dt0, dw0, p);
        const auto b = certify(c, net.coupling, dt0, dw0, p);
        EXPECT_EQ(a.verdict, b.verdict);
        EXPECT_EQ(a.mu, b.mu);
        bool all = a.a1.pass && a.a2_frustration.pass;
        for (const auto& q : a.a2_gamma_k) all = all && q.pass;
        for (const auto& q : a.a2_k) all = all && q.pass;
        EXPECT_EQ(a.verdict, all);
        if (a.verdict) {
            EXPECT_GT(a.rate, 0.0);
            EXPECT_GE(a.mu, 0.0);
        }
    }
}

TEST(FrameProperty, AlongTrajectories) {
    Gen g(111);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = g.index(2, 6);
        const auto net = g.network(n, 0.05, g.uniform(1, 10), 1.0);
        const auto c = compute_constants(net);
        const auto traj = simulate(net, g.state(n), {5e-3, 0.5, 2, EnergyCoefficients::make(c, {2.0, 0.3})});
        for (const auto& s : traj.samples) {
            EXPECT_GE(*s.frame.e1, s.frame.d_theta);
            EXPECT_GE(*s.frame.e2, s.frame.d_omega);
            EXPECT_GE(s.frame.d_b, 0.0);
        }
    }
}
