#include <gtest/gtest.h>

#include "support.hpp"

using namespace fracshadow;
using namespace fs_test;

namespace {

TEST(RlIntegralLeft, Examples) {
    EXPECT_LE(rel_err(rl_integral_left(parse("1"), Order(0.5), 1).value, oracle::power_rule[1].value), 1e-9);
    EXPECT_LE(rel_err(rl_integral_left(parse("t+0.5*sin(t)"), Order(1), 10).value, oracle::classical_fig1), 1e-12);
    EXPECT_LE(rel_err(rl_integral_left(parse("t"), Order(0.75), 1).value, 1.0 / oracle::gamma_2_75), 1e-8);
    EXPECT_THROW((void)rl_integral_left(parse("1"), Order(0.5), 0), DomainError);
}

TEST(RlIntegralLeft, PowerRuleTable) {
    for (const auto& c : oracle::power_rule) {
        const QuadResult r = rl_integral_left(parse("t^" + format_real(c.beta)), Order(c.alpha), 1, {4096, {}});
        EXPECT_LE(rel_err(r.value, c.value), 1e-6) << c.beta << " " << c.alpha;
    }
}

TEST(RlIntegralLeft, HigherOrderAndScaling) {
    // I^1.5 t at t = 2: Gamma(2)/Gamma(3.5) 2^2.5.
    const double want = std::pow(2.0, 2.5) / fracshadow::gamma(3.5);
    EXPECT_LE(rel_err(rl_integral_left(parse("t"), Order(1.5), 2).value, want), 1e-9);
}

TEST(RlIntegralRight, Examples) {
    EXPECT_LE(rel_err(rl_integral_right(parse("1"), Order(0.5), 0, 1).value, oracle::power_rule[1].value), 1e-9);
    EXPECT_NEAR(rl_integral_right(parse("1"), Order(1), 3, 10).value, 7.0, 1e-12);
    EXPECT_NEAR(rl_integral_right(parse("t"), Order(1), 0, 2).value, 2.0, 1e-12);
    EXPECT_THROW((void)rl_integral_right(parse("1"), Order(0.5), 2, 2), DomainError);
    EXPECT_THROW((void)rl_integral_right(parse("1"), Order(0.5), -1, 2), DomainError);
}

TEST(RieszPotential, Examples) {
    EXPECT_NEAR(riesz_potential(parse("1"), Order(1), 3, 10).value, 10.0, 1e-12);
    EXPECT_LE(rel_err(riesz_potential(parse("1"), Order(0.5), 1, 4).value, oracle::riesz_1_05_1_4), 1e-9);
    EXPECT_LE(rel_err(riesz_potential(parse("t"), Order(0.75), 5, 10).value, oracle::riesz_t_total), 1e-8);
    EXPECT_LE(rel_err(rl_integral_left(parse("t"), Order(0.75), 5).value, oracle::riesz_t_left), 1e-8);
    EXPECT_LE(rel_err(rl_integral_right(parse("t"), Order(0.75), 5, 10).value, oracle::riesz_t_right), 1e-8);
    EXPECT_THROW((void)riesz_potential(parse("1"), Order(0.5), 0, 4), DomainError);
    EXPECT_THROW((void)riesz_potential(parse("1"), Order(0.5), 4, 4), DomainError);
}

TEST(FellerPotential, Examples) {
    const Expr f = parse("sin(t) + 2");
    const Order a(0.6);
    EXPECT_NEAR(feller_potential(f, a, 1, 0, 2, 0, 5).value, rl_integral_left(f, a, 2).value, 1e-13);
    EXPECT_NEAR(feller_potential(f, a, 1, 1, 2, 0, 5).value, riesz_potential(f, a, 2, 5).value, 1e-12);
    EXPECT_LE(rel_err(feller_potential(parse("1"), Order(0.5), 2, -1, 1, 0, 4).value, oracle::feller_2_m1), 1e-8);
    // t at either end keeps a single branch.
    EXPECT_NEAR(feller_potential(f, a, 3, 1, 0, 0, 5).value, rl_integral_right(f, a, 0, 5).value, 1e-13);
    EXPECT_THROW((void)feller_potential(f, a, 1, 1, 6, 0, 5), DomainError);
}

TEST(FellerPotential, ShiftedAnchor) {
    // c = 1, d = 0, a = 1: I^0.5 over [1, 2] of 1 is (2-1)^0.5 / Gamma(1.5).
    EXPECT_LE(rel_err(feller_potential(parse("1"), Order(0.5), 1, 0, 2, 1, 3).value, 1.0 / oracle::gamma_1_5), 1e-9);
}

TEST(VolterraConvolution, Examples) {
    EXPECT_LE(rel_err(volterra_convolution(parse("sin(t)"), parse("t"), 2).value, 1 - std::cos(2.0)), 1e-10);
    const QuadResult v =
        volterra_convolution(parse("1"), parse("t^0.75/" + format_real(oracle::gamma_1_75)), 1, {4096, {}});
    EXPECT_LE(rel_err(v.value, rl_integral_left(parse("1"), Order(0.75), 1).value), 1e-6);
    EXPECT_NEAR(volterra_convolution(parse("1"), parse("t^2"), 2).value, 4.0, 1e-12);
    EXPECT_THROW((void)volterra_convolution(parse("1"), parse("abs(t)"), 2), NonDifferentiableError);
}

TEST(RlDerivative, Examples) {
    EXPECT_LE(rel_err(rl_derivative(parse("t"), Order(0.5), 1).value, oracle::d05_t_at_1), 1e-6);
    EXPECT_LE(rel_err(rl_derivative(parse("1"), Order(0.5), 4).value, oracle::d05_1_at_4), 1e-6);
    const Expr s = parse("t^0.5/" + format_real(oracle::gamma_1_5));
    EXPECT_LE(rel_err(rl_derivative(s, Order(0.5), 1).value, 1.0), 1e-4);
    EXPECT_THROW((void)rl_derivative(parse("t"), Order(0.5), 1e-9), StepUnderflowError);
    EXPECT_THROW((void)rl_derivative(parse("t"), Order(1), 1), ArgumentError);
}

TEST(RlDerivative, ErrorEstimateCoversTruth) {
    for (double alpha : {0.25, 0.5, 0.75}) {
        const QuadResult r = rl_derivative(parse("t^2"), Order(alpha), 1.5);
        const double want = 2.0 / fracshadow::gamma(3.0 - alpha) * std::pow(1.5, 2.0 - alpha);
        EXPECT_LE(std::abs(r.value - want), 10 * r.error_estimate) << alpha;
    }
}

TEST(CaputoDerivative, Examples) {
    EXPECT_EQ(caputo_derivative(parse("1"), Order(0.3), 2).value, 0.0);
    const QuadResult ct = caputo_derivative(parse("t"), Order(0.5), 1);
    EXPECT_LE(rel_err(ct.value, oracle::d05_t_at_1), 1e-9);
    EXPECT_NEAR(caputo_derivative(parse("t+1"), Order(0.5), 1).value, ct.value, 1e-15);
    EXPECT_LE(rel_err(caputo_derivative(parse("t^2"), Order(0.999), 1).value, oracle::d0999_t2_at_1), 1e-6);
    EXPECT_THROW((void)caputo_derivative(parse("abs(t)"), Order(0.5), 1), NonDifferentiableError);
    EXPECT_THROW((void)caputo_derivative(parse("t"), Order(1.2), 1), ArgumentError);
}

TEST(CaputoDerivative, SingularDerivativeAtOrigin) {
    // f = t^0.5: f' is unbounded at 0; D^0.5 t^0.5 = Gamma(1.5).
    EXPECT_LE(rel_err(caputo_derivative(parse("t^0.5"), Order(0.5), 1, {4096, {}}).value, oracle::gamma_1_5), 2e-2);
}

TEST(GlDerivative, Examples) {
    EXPECT_LE(rel_err(gl_derivative(parse("t"), Order(0.5), 1, 100000).value, oracle::d05_t_at_1), 1e-3);
    EXPECT_LE(rel_err(gl_derivative(parse("1"), Order(0.5), 1, 100000).value, oracle::d05_1_at_1), 1e-3);
    EXPECT_LE(rel_err(gl_derivative(parse("t^2"), Order(0.999), 1, 100000).value, 2.0), 1e-2);
    EXPECT_THROW((void)gl_derivative(parse("t"), Order(0.5), 1, 15), ArgumentError);
    const QuadResult r = gl_derivative(parse("t"), Order(0.5), 1, 4096);
    EXPECT_LE(std::abs(r.value - oracle::d05_t_at_1), 10 * r.error_estimate);
}

TEST(ObserverVelocity, Examples) {
    const QuadResult one = observer_velocity(parse("t+0.5*sin(t)"), Order(1), 2);
    EXPECT_EQ(one.value, 2 + 0.5 * std::sin(2.0));
    EXPECT_EQ(one.error_estimate, 0.0);
    EXPECT_LE(rel_err(observer_velocity(parse("1"), Order(0.5), 1).value, oracle::d05_1_at_1), 1e-6);
    EXPECT_LE(rel_err(observer_velocity(parse("t"), Order(0.5), 1).value, oracle::d05_t_at_1), 1e-6);
    EXPECT_THROW((void)observer_velocity(parse("t"), Order(1.5), 1), ArgumentError);
}

TEST(Property, RieszDecomposition) {
    auto g = rng(51);
    const auto& pool = integrand_pool();
    for (int i = 0; i < 100; ++i) {
        const Expr f = parse(pool[static_cast<std::size_t>(pick(g, 10))]);
        const Order alpha(uniform(g, 0.05, 1.0));
        const double b = uniform(g, 0.5, 10);
        const double t = uniform(g, 0.05, 0.95) * b;
        const QuadOptions opts{256, {}};
        const QuadResult r = riesz_potential(f, alpha, t, b, opts);
        const QuadResult l = rl_integral_left(f, alpha, t, opts);
        const QuadResult rr = rl_integral_right(f, alpha, t, b, opts);
        ASSERT_LE(std::abs(r.value - l.value - rr.value), r.error_estimate + l.error_estimate + rr.error_estimate);
    }
}

TEST(Property, DerivativeInvertsIntegral) {
    for (const std::string& fs : smooth_pool()) {
        const Expr f = parse(fs);
        for (double alpha : {0.25, 0.5, 0.75}) {
            const Order a(alpha);
            const auto integral = [&](double s) { return rl_integral_left(f, a, s, {256, {}}).value; };
            const double t = 1.5;
            const QuadResult d = rl_derivative(integral, a, t, {64, {}});
            EXPECT_LE(std::abs(d.value - f(t)), 1e-3 * (1 + std::abs(f(t)))) << fs << " alpha " << alpha;
        }
    }
}

TEST(Property, RlCaputoCoincideWhenFVanishesAtZero) {
    for (const char* fs : {"t", "t^2", "sin(t)", "t + 0.5*sin(t)"}) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            for (double t : {0.5, 2.0, 7.0}) {
                const QuadResult rl = rl_derivative(parse(fs), Order(alpha), t);
                const QuadResult cp = caputo_derivative(parse(fs), Order(alpha), t);
                EXPECT_LE(std::abs(rl.value - cp.value), rl.error_estimate + cp.error_estimate)
                    << fs << " alpha " << alpha << " t " << t;
            }
        }
    }
}

TEST(Property, RlCaputoGapForConstant) {
    for (double alpha : {0.25, 0.5, 0.75}) {
        for (double t : {0.5, 1.0, 4.0}) {
            const double gap = rl_derivative(parse("1"), Order(alpha), t).value -
                               caputo_derivative(parse("1"), Order(alpha), t).value;
            const double gl = gl_derivative(parse("1"), Order(alpha), t, 1 << 15).value;
            const double exact = std::pow(t, -alpha) / fracshadow::gamma(1 - alpha);
            EXPECT_LE(rel_err(gap, exact), 1e-6);
            EXPECT_LE(rel_err(gl, exact), 1e-3);
        }
    }
}

TEST(Property, GrunwaldLetnikovAgreement) {
    for (const std::string& fs : smooth_pool()) {
        for (double alpha : {0.25, 0.5, 0.75}) {
            for (double t : {0.5, 3.0, 10.0}) {
                const double rl = rl_derivative(parse(fs), Order(alpha), t).value;
                const double gl = gl_derivative(parse(fs), Order(alpha), t, 1 << 15).value;
                EXPECT_LE(std::abs(gl - rl), 1e-2 * (1 + std::abs(rl))) << fs << " alpha " << alpha << " t " << t;
            }
        }
    }
}

TEST(Property, ObserverChainReconstructsSpeed) {
    const std::vector<std::pair<std::string, double (*)(double)>> pool = {
        {"1", [](double) { return 1.0; }},
        {"t", [](double s) { return s; }},
        {"t^2", [](double s) { return s * s; }},
        {"sin(t)", [](double s) { return std::sin(s); }},
        {"t + 0.5*sin(t)", [](double s) { return s + 0.5 * std::sin(s); }},
    };
    for (const auto& [name, v] : pool) {
        for (double alpha : {0.5, 0.75}) {
            const Order a(alpha);
            const auto vo = [&, v = v](double s) { return observer_velocity(v, a, s, {48, {}}).value; };
            const double t = 2.0;
            const double back = rl_integral_left(vo, Order(1 - alpha), t, {48, {}}).value;
            EXPECT_LE(rel_err(back, v(t)), 1e-2) << name << " alpha " << alpha;
        }
    }
}

}  // namespace
