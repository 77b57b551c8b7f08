#pragma once

// Fractional integrals and derivatives of order alpha.
//
// Integrals accept any alpha > 0; derivatives require 0 < alpha < 1.
// alpha == 1 always takes the classical code path.

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracshadow/core.hpp"
#include "fracshadow/error.hpp"
#include "fracshadow/expr.hpp"
#include "fracshadow/quad.hpp"
#include "fracshadow/timescale.hpp"

namespace fracshadow {

namespace detail {

inline void require_positive_time(double t, const char* who) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError(std::string(who) + ": t must be positive and finite, got " + format_real(t));
    }
}

/// (1/Gamma(alpha)) int_lo^t f(tau) (t - tau)^(alpha-1) dtau.
template <RealFunction F>
QuadResult left_integral(const F& f, Order alpha, double lo, double t, const QuadOptions& options) {
    if (alpha.is_classical()) return classical_integrate(f, Interval(lo, t), options.nodes);
    return product_integrate(f, alpha, Interval(lo, t), t, options);
}

/// (1/Gamma(alpha)) int_t^b f(tau) (tau - t)^(alpha-1) dtau.
template <RealFunction F>
QuadResult right_integral(const F& f, Order alpha, double t, double b, const QuadOptions& options) {
    if (alpha.is_classical()) return classical_integrate(f, Interval(t, b), options.nodes);
    return product_integrate(f, alpha, Interval(t, b), t, options);
}

}  // namespace detail

/// Left-sided Riemann-Liouville integral (1/Gamma(a)) int_0^t f(tau) (t-tau)^(a-1) dtau.
template <RealFunction F>
QuadResult rl_integral_left(const F& f, Order alpha, double t, const QuadOptions& options = {}) {
    detail::require_positive_time(t, "rl_integral_left");
    return detail::left_integral(f, alpha, 0.0, t, options);
}

/// Right-sided Riemann-Liouville integral (1/Gamma(a)) int_t^b f(tau) (tau-t)^(a-1) dtau.
template <RealFunction F>
QuadResult rl_integral_right(const F& f, Order alpha, double t, double b, const QuadOptions& options = {}) {
    if (!(t >= 0.0) || !(t < b) || !std::isfinite(b)) {
        throw DomainError("rl_integral_right: need 0 <= t < b, got t = " + format_real(t) + ", b = " + format_real(b));
    }
    return detail::right_integral(f, alpha, t, b, options);
}

/// Riesz potential (1/Gamma(a)) int_0^b f(tau) |tau - t|^(a-1) dtau, 0 < t < b.
/// Both sides are accumulated in one pass over the joined grid.
template <RealFunction F>
QuadResult riesz_potential(const F& f, Order alpha, double t, double b, const QuadOptions& options = {}) {
    if (!(t > 0.0) || !(t < b) || !std::isfinite(b)) {
        throw DomainError("riesz_potential: need 0 < t < b, got t = " + format_real(t) + ", b = " + format_real(b));
    }
    if (alpha.is_classical()) return classical_integrate(f, Interval(0.0, b), options.nodes);
    const double r = options.grading.value_or(default_grading(alpha));
    std::vector<double> nodes = make_grid(Interval(0.0, t), options.nodes, r).nodes;
    const std::vector<double> right = make_grid(Interval(t, b), options.nodes, r).nodes;
    nodes.insert(nodes.end(), right.begin() + 1, right.end());
    const ProductLevels lv = product_levels(f, alpha.value(), t, nodes);
    return detail::richardson(lv.coarse, lv.fine, 3.0, lv.fine_nodes, 1.0 / gamma(alpha.value()));
}

/// Feller potential c * (left integral over [a, t]) + d * (right integral over [t, b]).
template <RealFunction F>
QuadResult feller_potential(const F& f, Order alpha, double c, double d, double t, double a, double b,
                            const QuadOptions& options = {}) {
    if (!(a <= t && t <= b && a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("feller_potential: need a <= t <= b, got a = " + format_real(a) + ", t = " + format_real(t) +
                          ", b = " + format_real(b));
    }
    QuadResult out;
    if (t > a) {
        const QuadResult left = detail::left_integral(f, alpha, a, t, options);
        out.value += c * left.value;
        out.error_estimate += std::abs(c) * left.error_estimate;
        out.nodes_used += left.nodes_used;
    }
    if (t < b) {
        const QuadResult right = detail::right_integral(f, alpha, t, b, options);
        out.value += d * right.value;
        out.error_estimate += std::abs(d) * right.error_estimate;
        out.nodes_used += right.nodes_used;
    }
    return out;
}

/// Volterra convolution int_0^t f(tau) k(t - tau) dtau with k = K', computed as
/// the Stieltjes integral int_0^t f dq_t, q_t(tau) = K(t) - K(t - tau).
template <RealFunction F>
QuadResult volterra_convolution(const F& f, const Expr& kernel, double t, const QuadOptions& options = {}) {
    detail::require_positive_time(t, "volterra_convolution");
    (void)differentiate(kernel);  // rejects kernels with abs/sign
    return stieltjes(f, TimeScale{Volterra{kernel}, t}, options);
}

/// Riemann-Liouville derivative d/dt I^(1-alpha) f (t), 0 < alpha < 1.
///
/// F(s) = I^(1-alpha) f (s) is computed by product integration at
/// s = t +- h and t +- h/2 with h = 1e-4 t; the two central differences are
/// Richardson-combined in h. Because the grid scales with s, the
/// quadrature error of F is smooth in s, so differencing the coarse and fine
/// quadrature levels separately yields a second Richardson step and an error
/// estimate for the quadrature part.
template <RealFunction F>
QuadResult rl_derivative(const F& f, Order alpha, double t, const QuadOptions& options = {}) {
    require_derivative_order(alpha);
    if (!std::isfinite(t) || t < 1e-8) {
        throw StepUnderflowError("rl_derivative: t = " + format_real(t) + " too small for a difference step");
    }
    const Order beta(1.0 - alpha.value());
    const double r = options.grading.value_or(default_grading(beta));
    const double h = 1e-4 * t;

    const auto levels = [&](double s) {
        const Grid grid = make_grid(Interval(0.0, s), options.nodes, r);
        return product_levels(f, beta.value(), s, grid.nodes);
    };
    const ProductLevels plus = levels(t + h);
    const ProductLevels minus = levels(t - h);
    const ProductLevels plus2 = levels(t + 0.5 * h);
    const ProductLevels minus2 = levels(t - 0.5 * h);

    struct Estimate {
        double value;
        double step_error;
    };
    const auto differentiate_level = [&](auto pick) {
        const double d_h = (pick(plus) - pick(minus)) / (2.0 * h);
        const double d_h2 = (pick(plus2) - pick(minus2)) / h;
        return Estimate{(4.0 * d_h2 - d_h) / 3.0, std::abs(d_h2 - d_h) / 3.0};
    };
    const Estimate coarse = differentiate_level([](const ProductLevels& lv) { return lv.coarse.value; });
    const Estimate fine = differentiate_level([](const ProductLevels& lv) { return lv.fine.value; });

    const double norm = 1.0 / gamma(beta.value());
    const double quad_error = std::abs(fine.value - coarse.value) / 3.0;
    const double roundoff = (roundoff_bound(plus.fine.magnitude) + roundoff_bound(minus.fine.magnitude) +
                             roundoff_bound(plus2.fine.magnitude) + roundoff_bound(minus2.fine.magnitude)) /
                            h;
    return {norm * (fine.value + (fine.value - coarse.value) / 3.0),
            norm * (quad_error + fine.step_error + roundoff),
            plus.fine_nodes + minus.fine_nodes + plus2.fine_nodes + minus2.fine_nodes};
}

/// Caputo derivative (1/Gamma(1-a)) int_0^t f'(tau) (t - tau)^(-a) dtau with
/// f' obtained symbolically.
inline QuadResult caputo_derivative(const Expr& f, Order alpha, double t, const QuadOptions& options = {}) {
    require_derivative_order(alpha);
    detail::require_positive_time(t, "caputo_derivative");
    const Expr df = differentiate(f);
    return product_integrate(df, Order(1.0 - alpha.value()), t, options);
}

/// Grunwald-Letnikov sum h^(-a) sum_{j=0}^{n} w_j f(t - j h), h = t / n,
/// w_0 = 1, w_j = w_{j-1} (1 - (a + 1) / j). The error estimate compares
/// with the n/2 sum (the method is first order).
template <RealFunction F>
QuadResult gl_derivative(const F& f, Order alpha, double t, std::size_t n) {
    require_derivative_order(alpha);
    detail::require_positive_time(t, "gl_derivative");
    if (n < 16) throw ArgumentError("gl_derivative needs n >= 16, got " + std::to_string(n));
    const double a = alpha.value();
    const auto gl_sum = [&](std::size_t m) {
        const double scale = std::pow(t / static_cast<double>(m), -a);
        CompensatedSum sum;
        double w = 1.0;
        for (std::size_t j = 0; j <= m; ++j) {
            const double x = t * (static_cast<double>(m - j) / static_cast<double>(m));
            sum.add(w * detail::sample(f, x));
            w *= 1.0 - (a + 1.0) / static_cast<double>(j + 1);
        }
        return RawSum{scale * sum.value(), scale * sum.magnitude()};
    };
    const RawSum full = gl_sum(n);
    const RawSum half = gl_sum(n / 2);
    return {full.value, std::abs(half.value - full.value) + roundoff_bound(full.magnitude), n + 1};
}

/// Velocity seen by the independent observer, d/dt I^a v = D^(1-a) v.
/// For a = 1 both velocities coincide and v(t) is returned exactly.
template <RealFunction F>
QuadResult observer_velocity(const F& v, Order alpha, double t, const QuadOptions& options = {}) {
    if (alpha.value() > 1.0) throw ArgumentError("observer_velocity needs 0 < alpha <= 1");
    detail::require_positive_time(t, "observer_velocity");
    if (alpha.is_classical()) return {detail::sample(v, t), 0.0, 1};
    return rl_derivative(v, Order(1.0 - alpha.value()), t, options);
}

}  // namespace fracshadow
