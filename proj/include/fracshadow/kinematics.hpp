#pragma once

// Distances and velocities measured in two kinds of time: the moving
// object's own (individual) clock tau and the cosmic time T = g(tau).

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracshadow/core.hpp"
#include "fracshadow/error.hpp"
#include "fracshadow/expr.hpp"
#include "fracshadow/operators.hpp"
#include "fracshadow/quad.hpp"

namespace fracshadow {

/// Speed readings taken at individual seconds 0, 1, 2, ...
struct SpeedRecord {
    std::vector<double> speeds;
};

/// Cosmic time of each individual tick, T_0 = 0 < T_1 < ...
/// Between ticks it interpolates linearly.
class ClockModel {
public:
    explicit ClockModel(std::vector<double> ticks) : ticks_(std::move(ticks)) {
        if (ticks_.empty() || ticks_.front() != 0.0) throw ArgumentError("clock must start at T_0 = 0");
        for (std::size_t i = 1; i < ticks_.size(); ++i) {
            if (!(ticks_[i] > ticks_[i - 1])) throw ArgumentError("clock ticks must be strictly increasing");
        }
    }

    /// T_i = i.
    static ClockModel identity(std::size_t count) {
        std::vector<double> t(count);
        for (std::size_t i = 0; i < count; ++i) t[i] = static_cast<double>(i);
        return ClockModel(std::move(t));
    }

    /// A clock whose every tick lasts twice the previous one: T_i = 2^i - 1.
    static ClockModel doubling(std::size_t count) {
        std::vector<double> t(count);
        for (std::size_t i = 0; i < count; ++i) t[i] = std::ldexp(1.0, static_cast<int>(i)) - 1.0;
        return ClockModel(std::move(t));
    }

    const std::vector<double>& ticks() const noexcept { return ticks_; }

    double operator()(double tau) const {
        const double last = static_cast<double>(ticks_.size() - 1);
        if (!(tau >= 0.0 && tau <= last)) {
            throw DomainError("clock evaluated outside its ticks at tau = " + format_real(tau));
        }
        if (ticks_.size() == 1) return 0.0;
        const auto i = std::min(static_cast<std::size_t>(tau), ticks_.size() - 2);
        const double frac = tau - static_cast<double>(i);
        return ticks_[i] + frac * (ticks_[i + 1] - ticks_[i]);
    }

private:
    std::vector<double> ticks_;
};

/// The slowing-clock experiment: speeds 10, 11, 12, 13, 12, 11, 10, 9.
inline SpeedRecord table1_record() { return {{10, 11, 12, 13, 12, 11, 10, 9}}; }

/// Distance by the individual clock: sum of v_i * 1 over the N - 1 intervals.
inline double distance_individual(const SpeedRecord& record) {
    if (record.speeds.empty()) throw ArgumentError("speed record is empty");
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < record.speeds.size(); ++i) s += record.speeds[i];
    return s;
}

/// Distance by the cosmic clock: sum of v_i * (T_{i+1} - T_i).
inline double distance_observer_discrete(const SpeedRecord& record, const ClockModel& clock) {
    if (record.speeds.empty()) throw ArgumentError("speed record is empty");
    if (clock.ticks().size() < record.speeds.size()) {
        throw ArgumentError("clock has " + std::to_string(clock.ticks().size()) + " ticks for " +
                            std::to_string(record.speeds.size()) + " speed readings");
    }
    const auto& T = clock.ticks();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < record.speeds.size(); ++i) s += record.speeds[i] * (T[i + 1] - T[i]);
    return s;
}

struct ObserverDistance {
    QuadResult result;
    bool monotone = true;  ///< false if g decreased somewhere on the grid
};

/// S_O = int_0^t v(tau) dg(tau) on a caller-supplied grid. A decreasing g is
/// flagged but still integrated as a signed Stieltjes integral.
template <RealFunction V, RealFunction G>
ObserverDistance distance_observer_continuous(const V& v, const G& g, const Grid& grid) {
    ObserverDistance out;
    double prev = detail::sample(g, grid.nodes.front());
    for (std::size_t i = 1; i < grid.nodes.size(); ++i) {
        const double next = detail::sample(g, grid.nodes[i]);
        if (next < prev) out.monotone = false;
        prev = next;
    }
    out.result = stieltjes(v, g, grid);
    return out;
}

template <RealFunction V, RealFunction G>
ObserverDistance distance_observer_continuous(const V& v, const G& g, double t, const QuadOptions& options = {}) {
    detail::require_positive_time(t, "distance_observer_continuous");
    return distance_observer_continuous(v, g, make_grid(Interval(0.0, t), options.nodes, options.grading.value_or(1.0)));
}

/// S_O(t) = int_0^t v dg_t = I^alpha v (t).
template <RealFunction V>
QuadResult distance_fractional(const V& v, Order alpha, double t, const QuadOptions& options = {}) {
    return rl_integral_left(v, alpha, t, options);
}

struct RecoveredSpeed {
    QuadResult value;   ///< Riemann-Liouville D^alpha S
    QuadResult caputo;  ///< Caputo D^alpha S; equals `value` when S(0) = 0
};

/// Individual speed from a distance history, v = D^alpha S_O.
inline RecoveredSpeed recover_individual_speed(const Expr& distance, Order alpha, double t,
                                               const QuadOptions& options = {}) {
    return {rl_derivative(distance, alpha, t, options), caputo_derivative(distance, alpha, t, options)};
}

}  // namespace fracshadow
