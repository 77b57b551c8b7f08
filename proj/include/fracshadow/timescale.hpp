#pragma once

// Deformed time scales: the functions g whose Stieltjes integral
// int f(tau) dg(tau) reproduces each fractional operator.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fracshadow/core.hpp"
#include "fracshadow/error.hpp"
#include "fracshadow/expr.hpp"

namespace fracshadow {

namespace detail {

inline void require_in(double tau, double lo, double hi, const char* who) {
    if (!std::isfinite(tau) || tau < lo || tau > hi) {
        throw DomainError(std::string(who) + ": tau = " + format_real(tau) + " outside [" + format_real(lo) + ", " +
                          format_real(hi) + "]");
    }
}

}  // namespace detail

/// g_t(tau) = {t^a - (t - tau)^a} / Gamma(a + 1) on 0 <= tau <= t.
inline double scale_left(Order alpha, double t, double tau) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("scale_left: t must be positive, got " + format_real(t));
    detail::require_in(tau, 0.0, t, "scale_left");
    if (alpha.is_classical()) return tau;
    const double a = alpha.value();
    return (std::pow(t, a) - std::pow(t - tau, a)) / gamma(a + 1.0);
}

/// h_t(tau) = {t^a + (tau - t)^a} / Gamma(a + 1) on t <= tau <= b.
inline double scale_right(Order alpha, double t, double b, double tau) {
    if (!(t >= 0.0) || !std::isfinite(b)) throw DomainError("scale_right: need 0 <= t, got t = " + format_real(t));
    detail::require_in(tau, t, b, "scale_right");
    if (alpha.is_classical()) return tau;
    const double a = alpha.value();
    return (std::pow(t, a) + std::pow(tau - t, a)) / gamma(a + 1.0);
}

/// r_t(tau) = {t^a + sign(tau - t) |tau - t|^a} / Gamma(a + 1), tau >= 0.
/// sign(0) = 0, so r_t(t) = t^a / Gamma(a + 1) exactly.
inline double scale_riesz(Order alpha, double t, double tau) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("scale_riesz: need t >= 0, got " + format_real(t));
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw DomainError("scale_riesz: tau must be finite and non-negative, got " + format_real(tau));
    }
    if (alpha.is_classical()) return tau;
    const double a = alpha.value();
    const double d = tau - t;
    const double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    return (std::pow(t, a) + s * std::pow(std::abs(d), a)) / gamma(a + 1.0);
}

/// q_t(tau) = K(t) - K(t - tau). Only differences of K matter, so q_t(0) = 0
/// for every kernel.
inline double scale_volterra(const Expr& kernel, double t, double tau) {
    detail::require_in(tau, 0.0, t, "scale_volterra");
    return eval(kernel, t) - eval(kernel, t - tau);
}

/// The two weighted branches of the Feller scale. `left` is present for
/// tau <= t, `right` for tau >= t; both at tau = t, where they may differ.
struct FellerBranches {
    std::optional<double> left;
    std::optional<double> right;
};

/// Left branch c {(t-a)^al - (t-tau)^al} / Gamma(al+1), right branch
/// d {(t-a)^al + (tau-t)^al} / Gamma(al+1). With a = 0 these are c g_t and d h_t.
inline FellerBranches scale_feller(Order alpha, double c, double d, double a, double b, double t, double tau) {
    if (!(a <= t && t <= b)) {
        throw DomainError("scale_feller: need a <= t <= b, got a = " + format_real(a) + ", t = " + format_real(t) +
                          ", b = " + format_real(b));
    }
    detail::require_in(tau, a, b, "scale_feller");
    FellerBranches out;
    const double al = alpha.value();
    if (alpha.is_classical()) {
        if (tau <= t) out.left = c * (tau - a);
        if (tau >= t) out.right = d * (tau - a);
        return out;
    }
    const double anchor = std::pow(t - a, al);
    const double norm = gamma(al + 1.0);
    if (tau <= t) out.left = c * (anchor - std::pow(t - tau, al)) / norm;
    if (tau >= t) out.right = d * (anchor + std::pow(tau - t, al)) / norm;
    return out;
}

// ---------------------------------------------------------------------------
// Families and anchored scales

struct LeftRL {
    Order alpha;
};
struct RightRL {
    Order alpha;
    double b;
};
struct Riesz {
    Order alpha;
    double b;
};
struct Feller {
    Order alpha;
    double c;
    double d;
    double a;
    double b;
};
struct Volterra {
    Expr kernel;
};

/// A scale family without its anchor time.
using ScaleFamily = std::variant<LeftRL, RightRL, Riesz, Feller, Volterra>;

enum class ScaleKind { left_rl, right_rl, riesz, feller, volterra };

inline ScaleKind kind_of(const ScaleFamily& family) { return static_cast<ScaleKind>(family.index()); }

inline std::optional<Order> order_of(const ScaleFamily& family) {
    return std::visit(
        [](const auto& f) -> std::optional<Order> {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, Volterra>) return std::nullopt;
            else return f.alpha;
        },
        family);
}

/// g_t for a given family anchored at time t.
struct TimeScale {
    ScaleFamily family;
    double t;
};

/// Value of a single-valued scale. Feller scales have two branches; use
/// scale_feller for them.
inline double scale_value(const TimeScale& scale, double tau) {
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, LeftRL>) return scale_left(f.alpha, scale.t, tau);
            else if constexpr (std::is_same_v<T, RightRL>) return scale_right(f.alpha, scale.t, f.b, tau);
            else if constexpr (std::is_same_v<T, Riesz>) {
                detail::require_in(tau, 0.0, f.b, "scale_riesz");
                return scale_riesz(f.alpha, scale.t, tau);
            } else if constexpr (std::is_same_v<T, Volterra>) return scale_volterra(f.kernel, scale.t, tau);
            else throw ArgumentError("Feller scale is two-valued at tau = t; use scale_feller");
        },
        scale.family);
}

/// Grading used for a Volterra kernel: uniform when k = K' is finite at 0,
/// graded toward tau = t (where dq_t/dtau = k(t - tau)) when it is not.
inline double volterra_grading(const Expr& kernel) {
    try {
        (void)eval(differentiate(kernel), 0.0);
        return 1.0;
    } catch (const NonDifferentiableError&) {
        return 2.0;
    } catch (const DomainError&) {
        return 4.0;
    }
}

/// One continuous piece of a scale: its tau-range, how its grid is graded, and g.
struct ScaleSegment {
    Interval span;
    Cluster cluster;
    double grading;
    std::function<double(double)> g;
};

/// Splits a scale into continuous pieces, each graded toward the singular
/// end of dg. Zero-width pieces (t at an end of the domain) are dropped.
inline std::vector<ScaleSegment> segments(const TimeScale& scale, std::optional<double> grading = std::nullopt) {
    const double t = scale.t;
    if (!std::isfinite(t)) throw DomainError("anchor time must be finite");
    std::vector<ScaleSegment> out;
    const auto push = [&](double lo, double hi, Cluster cluster, double r, std::function<double(double)> g) {
        if (hi > lo) out.push_back({Interval(lo, hi), cluster, grading.value_or(r), std::move(g)});
    };
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, LeftRL>) {
                if (!(t > 0.0)) throw DomainError("left-sided scale needs t > 0");
                push(0.0, t, Cluster::upper, default_grading(f.alpha),
                     [alpha = f.alpha, t](double tau) { return scale_left(alpha, t, tau); });
            } else if constexpr (std::is_same_v<T, RightRL>) {
                if (!(t >= 0.0 && t < f.b)) throw DomainError("right-sided scale needs 0 <= t < b");
                push(t, f.b, Cluster::lower, default_grading(f.alpha),
                     [alpha = f.alpha, t, b = f.b](double tau) { return scale_right(alpha, t, b, tau); });
            } else if constexpr (std::is_same_v<T, Riesz>) {
                if (!(t >= 0.0 && t <= f.b && f.b > 0.0)) throw DomainError("Riesz scale needs 0 <= t <= b");
                const double r = default_grading(f.alpha);
                auto g = [alpha = f.alpha, t](double tau) { return scale_riesz(alpha, t, tau); };
                push(0.0, t, Cluster::upper, r, g);
                push(t, f.b, Cluster::lower, r, g);
            } else if constexpr (std::is_same_v<T, Feller>) {
                if (!(f.a <= t && t <= f.b && f.a < f.b)) throw DomainError("Feller scale needs a <= t <= b");
                const double r = default_grading(f.alpha);
                push(f.a, t, Cluster::upper, r, [f, t](double tau) {
                    return *scale_feller(f.alpha, f.c, f.d, f.a, f.b, t, tau).left;
                });
                push(t, f.b, Cluster::lower, r, [f, t](double tau) {
                    return *scale_feller(f.alpha, f.c, f.d, f.a, f.b, t, tau).right;
                });
            } else {
                if (!(t > 0.0)) throw DomainError("Volterra scale needs t > 0");
                push(0.0, t, Cluster::upper, volterra_grading(f.kernel),
                     [kernel = f.kernel, t](double tau) { return scale_volterra(kernel, t, tau); });
            }
        },
        scale.family);
    if (out.empty()) throw DomainError("time scale has an empty domain");
    return out;
}

}  // namespace fracshadow
