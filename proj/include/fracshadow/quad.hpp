#pragma once

// Quadrature engines: Riemann-Stieltjes sums against a time scale, product
// integration of the weakly singular kernel |s - tau|^(alpha-1), and
// composite Simpson. Each engine runs on a grid and on its bisection and
// combines the two by one Richardson step.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "fracshadow/core.hpp"
#include "fracshadow/error.hpp"
#include "fracshadow/timescale.hpp"

namespace fracshadow {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t nodes_used = 0;
};

struct QuadOptions {
    std::size_t nodes = 1024;
    std::optional<double> grading;  ///< overrides the operator's default grading
};

template <class F>
concept RealFunction = std::regular_invocable<const F&, double> &&
                       std::convertible_to<std::invoke_result_t<const F&, double>, double>;

/// A plain sum plus sum |term|, the input for a roundoff bound.
struct RawSum {
    double value = 0.0;
    double magnitude = 0.0;
};

namespace detail {

template <RealFunction F>
double sample(const F& f, double x) {
    double v = 0.0;
    try {
        v = f(x);
    } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) + " (at tau = " + format_real(x) + ")");
    }
    if (!std::isfinite(v)) throw DomainError("non-finite function value at tau = " + format_real(x));
    return v;
}

/// Inserts the midpoint of every cell.
inline std::vector<double> bisect(std::span<const double> nodes) {
    std::vector<double> out;
    out.reserve(2 * nodes.size());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        out.push_back(nodes[i]);
        out.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    out.push_back(nodes.back());
    return out;
}

/// One Richardson step for a method of order p: value = fine + (fine - coarse)/(2^p - 1).
inline QuadResult richardson(const RawSum& coarse, const RawSum& fine, double divisor, std::size_t nodes,
                             double scale = 1.0) {
    const double diff = (fine.value - coarse.value) / divisor;
    return {scale * (fine.value + diff), std::abs(scale) * (std::abs(diff) + roundoff_bound(fine.magnitude)), nodes};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Riemann-Stieltjes

/// sum_i f(midpoint_i) * [g(tau_{i+1}) - g(tau_i)] over the given nodes.
template <RealFunction F, RealFunction G>
RawSum stieltjes_sum(const F& f, const G& g, std::span<const double> nodes) {
    if (nodes.size() < 2) throw ArgumentError("Stieltjes sum needs at least one cell");
    CompensatedSum sum;
    double g_prev = detail::sample(g, nodes[0]);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double g_next = detail::sample(g, nodes[i + 1]);
        const double dg = g_next - g_prev;
        if (dg != 0.0) sum.add(detail::sample(f, 0.5 * (nodes[i] + nodes[i + 1])) * dg);
        g_prev = g_next;
    }
    return {sum.value(), sum.magnitude()};
}

/// int f dg over the grid's span: midpoint Stieltjes sums on the grid and on
/// its bisection, one Richardson step, error estimate |fine - coarse| / 3.
template <RealFunction F, RealFunction G>
QuadResult stieltjes(const F& f, const G& g, const Grid& grid) {
    const std::vector<double> fine_nodes = detail::bisect(grid.nodes);
    const RawSum coarse = stieltjes_sum(f, g, grid.nodes);
    const RawSum fine = stieltjes_sum(f, g, fine_nodes);
    return detail::richardson(coarse, fine, 3.0, fine_nodes.size());
}

/// int_interval f d(scale) on a caller-supplied grid spanning the interval.
template <RealFunction F>
QuadResult stieltjes(const F& f, const TimeScale& scale, const Interval& interval, const Grid& grid) {
    if (grid.nodes.size() < 2 || grid.nodes.front() != interval.lower() || grid.nodes.back() != interval.upper()) {
        throw ArgumentError("grid does not span the integration interval");
    }
    return stieltjes(f, [&scale](double tau) { return scale_value(scale, tau); }, grid);
}

/// int f d(scale) over the scale's whole domain, one graded grid per segment.
/// Feller scales contribute both branches.
template <RealFunction F>
QuadResult stieltjes(const F& f, const TimeScale& scale, const QuadOptions& options = {}) {
    QuadResult total;
    for (const ScaleSegment& seg : segments(scale, options.grading)) {
        const QuadResult part = stieltjes(f, seg.g, make_grid(seg.span, options.nodes, seg.grading, seg.cluster));
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.nodes_used += part.nodes_used;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Product integration

namespace detail {

struct CellWeights {
    double near;  ///< weight of f at the node closer to the singular point
    double far;
};

/// Exact moments of u^(alpha-1) against the linear interpolant on a cell
/// whose distances from the singular point are a (near) and b (far).
inline CellWeights product_weights(double a, double b, double alpha) {
    const double h = b - a;
    const double q = h / b;
    if (q <= 0.25) {
        // (b - y)^(alpha-1) = b^(alpha-1) sum_k e_k (y/b)^k, e_k = e_{k-1} (k - alpha) / k.
        double e = 1.0;
        double qk = 1.0;
        double s_near = 0.5;
        double s_far = 0.5;
        for (int k = 1; k < 200; ++k) {
            e *= (k - alpha) / k;
            qk *= q;
            const double term = e * qk;
            const double dn = term / (k + 2);
            const double df = term / ((k + 1.0) * (k + 2.0));
            s_near += dn;
            s_far += df;
            if (std::abs(dn) <= 1e-18 * std::abs(s_near) && std::abs(df) <= 1e-18 * std::abs(s_far)) break;
        }
        const double pref = std::pow(b, alpha - 1.0) * h;
        return {pref * s_near, pref * s_far};
    }
    const double ba = std::pow(b, alpha);
    const double aa = a > 0.0 ? std::pow(a, alpha) : 0.0;
    const double m0 = (ba - aa) / alpha;
    const double m1 = (b * ba - a * aa) / (alpha + 1.0);
    const double near = (b * m0 - m1) / h;
    return {near, m0 - near};
}

/// Samples f at every node. A failure at the first or last node is tolerated
/// (an integrable endpoint singularity) and reported as nullopt.
template <RealFunction F>
std::vector<std::optional<double>> sample_with_open_ends(const F& f, std::span<const double> nodes) {
    std::vector<std::optional<double>> values(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const bool end = i == 0 || i + 1 == nodes.size();
        if (!end) {
            values[i] = sample(f, nodes[i]);
            continue;
        }
        try {
            values[i] = sample(f, nodes[i]);
        } catch (const DomainError&) {
            values[i] = std::nullopt;
        }
    }
    return values;
}

/// Product-trapezoid sum over nodes taken with the given stride from the
/// sampled values. A missing endpoint value is replaced by its neighbour,
/// which turns the first (or last) cell into a product rectangle.
inline RawSum product_sum(std::span<const double> nodes, const std::vector<std::optional<double>>& values,
                          std::size_t stride, double alpha, double singular_point) {
    const std::size_t last = nodes.size() - 1;
    const auto value_at = [&](std::size_t i) {
        if (values[i]) return *values[i];
        const std::size_t j = i == 0 ? stride : last - stride;
        if (!values[j]) throw DomainError("integrand undefined at both ends of a cell");
        return *values[j];
    };
    CompensatedSum sum;
    for (std::size_t i = 0; i + stride <= last; i += stride) {
        const double x0 = nodes[i];
        const double x1 = nodes[i + stride];
        const double f0 = value_at(i);
        const double f1 = value_at(i + stride);
        if (x1 <= singular_point) {
            const CellWeights w = product_weights(singular_point - x1, singular_point - x0, alpha);
            sum.add(w.near * f1);
            sum.add(w.far * f0);
        } else if (x0 >= singular_point) {
            const CellWeights w = product_weights(x0 - singular_point, x1 - singular_point, alpha);
            sum.add(w.near * f0);
            sum.add(w.far * f1);
        } else {
            throw ArgumentError("singular point " + format_real(singular_point) + " lies inside a grid cell");
        }
    }
    return {sum.value(), sum.magnitude()};
}

}  // namespace detail

/// Coarse (given nodes) and fine (bisected) raw product-trapezoid sums of
/// int f(tau) |s - tau|^(alpha-1) dtau, without the 1/Gamma(alpha) factor.
struct ProductLevels {
    RawSum coarse;
    RawSum fine;
    std::size_t fine_nodes = 0;
};

template <RealFunction F>
ProductLevels product_levels(const F& f, double alpha, double singular_point, std::span<const double> nodes) {
    if (nodes.size() < 2) throw ArgumentError("product integration needs at least one cell");
    const std::vector<double> fine_nodes = detail::bisect(nodes);
    const auto values = detail::sample_with_open_ends(f, fine_nodes);
    return {detail::product_sum(fine_nodes, values, 2, alpha, singular_point),
            detail::product_sum(fine_nodes, values, 1, alpha, singular_point), fine_nodes.size()};
}

/// (1/Gamma(alpha)) int_span f(tau) |s - tau|^(alpha-1) dtau for a singular
/// point s at or beyond one end of the span. f is taken piecewise linear and
/// the kernel is integrated exactly against it on every cell.
template <RealFunction F>
QuadResult product_integrate(const F& f, Order alpha, const Interval& span, double singular_point,
                             const QuadOptions& options = {}) {
    const Grid grid = make_grid(span, options.nodes, options.grading.value_or(default_grading(alpha)));
    const ProductLevels lv = product_levels(f, alpha.value(), singular_point, grid.nodes);
    return detail::richardson(lv.coarse, lv.fine, 3.0, lv.fine_nodes, 1.0 / gamma(alpha.value()));
}

/// Left-sided Riemann-Liouville integral by product integration:
/// (1/Gamma(alpha)) int_0^t f(tau) (t - tau)^(alpha-1) dtau.
template <RealFunction F>
QuadResult product_integrate(const F& f, Order alpha, double t, const QuadOptions& options = {}) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("product_integrate: t must be positive");
    return product_integrate(f, alpha, Interval(0.0, t), t, options);
}

// ---------------------------------------------------------------------------
// Classical

/// Composite Simpson on n cells (rounded up to even) and on 2n, Richardson-combined.
template <RealFunction F>
QuadResult classical_integrate(const F& f, const Interval& interval, std::size_t n) {
    if (n < 2) throw ArgumentError("classical_integrate needs n >= 2");
    if (n % 2 != 0) ++n;
    const std::size_t fine_cells = 2 * n;
    const double h = interval.width() / static_cast<double>(fine_cells);
    std::vector<double> values(fine_cells + 1);
    for (std::size_t i = 0; i <= fine_cells; ++i) {
        const double x = i == fine_cells ? interval.upper() : interval.lower() + static_cast<double>(i) * h;
        values[i] = detail::sample(f, x);
    }
    const auto simpson = [&](std::size_t stride) {
        const double step = h * static_cast<double>(stride);
        CompensatedSum sum;
        for (std::size_t i = 0; i + 2 * stride <= fine_cells; i += 2 * stride) {
            sum.add(step / 3.0 * values[i]);
            sum.add(4.0 * step / 3.0 * values[i + stride]);
            sum.add(step / 3.0 * values[i + 2 * stride]);
        }
        return RawSum{sum.value(), sum.magnitude()};
    };
    return detail::richardson(simpson(2), simpson(1), 15.0, fine_cells + 1);
}

}  // namespace fracshadow
