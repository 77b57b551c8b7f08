#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "fracshadow/error.hpp"
#include "fracshadow/format.hpp"

namespace fracshadow {

/// Fractional order alpha. Always finite and positive; derivative operators
/// additionally call require_derivative_order().
class Order {
public:
    explicit Order(double alpha) : alpha_(alpha) {
        if (!std::isfinite(alpha) || !(alpha > 0.0)) {
            throw ArgumentError("order must be finite and positive, got " + format_real(alpha));
        }
    }

    double value() const noexcept { return alpha_; }
    /// alpha == 1 exactly: every operator takes its classical code path.
    bool is_classical() const noexcept { return alpha_ == 1.0; }

    friend bool operator==(Order, Order) = default;

private:
    double alpha_;
};

inline void require_derivative_order(Order alpha) {
    if (!(alpha.value() < 1.0)) {
        throw ArgumentError("derivative order must lie in (0, 1), got " + format_real(alpha.value()));
    }
}

/// Closed interval [lower, upper] with lower < upper.
class Interval {
public:
    Interval(double lower, double upper) : lower_(lower), upper_(upper) {
        if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
            throw ArgumentError("interval requires finite lower < upper, got [" + format_real(lower) + ", " +
                                format_real(upper) + "]");
        }
    }

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    double width() const noexcept { return upper_ - lower_; }

private:
    double lower_;
    double upper_;
};

/// Which end of the interval a graded grid crowds its nodes toward.
enum class Cluster { lower, upper };

struct Grid {
    std::vector<double> nodes;
    double grading = 1.0;
    Cluster cluster = Cluster::lower;

    std::size_t cells() const noexcept { return nodes.empty() ? 0 : nodes.size() - 1; }
};

namespace detail {

// Node formula without the public n >= 2 restriction; fences split a node
// budget across branches and may need single-cell pieces.
inline std::vector<double> graded_nodes(double lower, double upper, std::size_t n, double r, Cluster cluster) {
    std::vector<double> nodes(n + 1);
    const double width = upper - lower;
    for (std::size_t i = 0; i <= n; ++i) {
        if (cluster == Cluster::lower) {
            const double s = static_cast<double>(i) / static_cast<double>(n);
            nodes[i] = lower + width * (r == 1.0 ? s : std::pow(s, r));
        } else {
            const double s = static_cast<double>(n - i) / static_cast<double>(n);
            nodes[i] = upper - width * (r == 1.0 ? s : std::pow(s, r));
        }
    }
    nodes.front() = lower;
    nodes.back() = upper;
    return nodes;
}

}  // namespace detail

/// n cells, n + 1 nodes: node_i = lower + (upper - lower) * (i/n)^r, or the
/// mirror image when clustering toward the upper end.
inline Grid make_grid(const Interval& interval, std::size_t n, double grading, Cluster cluster = Cluster::lower) {
    if (n < 2) throw ArgumentError("grid needs at least 2 cells, got " + std::to_string(n));
    if (!std::isfinite(grading) || grading < 1.0) {
        throw ArgumentError("grading must be >= 1, got " + format_real(grading));
    }
    Grid grid{detail::graded_nodes(interval.lower(), interval.upper(), n, grading, cluster), grading, cluster};
    for (std::size_t i = 1; i < grid.nodes.size(); ++i) {
        if (!(grid.nodes[i] > grid.nodes[i - 1])) {
            throw ArgumentError("grading " + format_real(grading) + " with " + std::to_string(n) +
                                " cells collapses nodes below double resolution");
        }
    }
    return grid;
}

/// Default mesh grading for an operator of order alpha: max(1, 2/alpha), capped
/// at 4, and uniform when the kernel is not singular (alpha >= 1).
inline double default_grading(Order alpha) {
    if (alpha.value() >= 1.0) return 1.0;
    return std::min(4.0, std::max(1.0, 2.0 / alpha.value()));
}

/// Gamma function for 0 < x <= 171.
///
/// Lanczos approximation with g = 7 and 9 coefficients on [0.5, 20]; the
/// recurrence Gamma(x) = Gamma(x + 1) / x below 0.5 and
/// Gamma(x) = (x - 1) Gamma(x - 1) above 20, where the truncation error of this
/// Lanczos variant grows past 1e-14. Integer arguments up to 23 return the
/// exactly representable factorial.
inline double gamma(double x) {
    if (!(x > 0.0)) throw DomainError("gamma: argument must be positive, got " + format_real(x));
    if (x > 171.0 || !std::isfinite(x)) throw DomainError("gamma: overflow for argument " + format_real(x));

    if (x == std::floor(x) && x <= 23.0) {
        double f = 1.0;
        for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
        return f;
    }
    if (x < 0.5) return gamma(x + 1.0) / x;
    if (x > 20.0) {
        // x - k is exact, so only the upward products round.
        double y = x - std::ceil(x - 20.0);
        double r = gamma(y);
        for (; y < x; y += 1.0) r *= y;
        return r;
    }

    static constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;

    const double z = x - 1.0;
    double sum = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) sum += c[i] / (z + static_cast<double>(i));
    const double base = z + g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(base, z + 0.5) * std::exp(-base) * sum;
}

/// Neumaier-compensated running sum; also tracks sum |x| for roundoff bounds.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
        magnitude_ += std::abs(x);
    }

    double value() const noexcept { return sum_ + carry_; }
    double magnitude() const noexcept { return magnitude_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
    double magnitude_ = 0.0;
};

/// Roundoff allowance added to every quadrature error estimate.
inline double roundoff_bound(double magnitude) noexcept {
    return 16.0 * std::numeric_limits<double>::epsilon() * magnitude;
}

}  // namespace fracshadow
