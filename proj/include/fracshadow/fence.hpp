#pragma once

// The "fence": the 3D polyline (tau, g_t(tau), f(tau)) over a time scale.
// Projected onto the (tau, f) wall its shadow has the area of the classical
// integral; projected onto the (g, f) wall, the area of the fractional one.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fracshadow/core.hpp"
#include "fracshadow/error.hpp"
#include "fracshadow/quad.hpp"
#include "fracshadow/timescale.hpp"

namespace fracshadow {

struct FencePoint {
    double tau;
    double g;
    double f;
};

struct Fence {
    std::vector<FencePoint> points;
    /// Set for two-branch (Feller) fences: points[*jump_at - 1] and
    /// points[*jump_at] share tau = t but are not joined.
    std::optional<std::size_t> jump_at;
    std::optional<Order> alpha;  ///< absent for Volterra kernels
    double t = 0.0;
    ScaleKind variant = ScaleKind::left_rl;
};

enum class Wall { tau_f, g_f };

struct Shadow {
    Wall wall;
    std::vector<std::pair<double, double>> boundary;  ///< (tau or g, f)
    double area;
};

struct Snapshot {
    double t;
    Fence fence;
    Shadow shadow;  ///< the (g, f) shadow
};

struct SnapshotSeries {
    std::vector<Snapshot> snapshots;
    double dt;
};

namespace detail {

inline std::vector<std::size_t> split_nodes(std::size_t n, const std::vector<ScaleSegment>& segs) {
    if (segs.size() == 1) return {n};
    const double left = segs[0].span.width();
    const double total = left + segs[1].span.width();
    const auto share = static_cast<std::size_t>(std::lround(static_cast<double>(n) * left / total));
    const std::size_t n_left = std::clamp<std::size_t>(share, 1, n - 1);
    return {n_left, n - n_left};
}

}  // namespace detail

/// Samples the fence on the scale's graded grid: n cells in total, split
/// across the branches of two-sided scales in proportion to their length.
template <RealFunction F>
Fence build_fence(const F& f, const TimeScale& scale, std::size_t n, std::optional<double> grading = std::nullopt) {
    if (n < 2) throw ArgumentError("build_fence needs n >= 2, got " + std::to_string(n));
    const std::vector<ScaleSegment> segs = segments(scale, grading);
    const std::vector<std::size_t> counts = detail::split_nodes(n, segs);

    Fence fence;
    fence.alpha = order_of(scale.family);
    fence.t = scale.t;
    fence.variant = kind_of(scale.family);
    for (std::size_t s = 0; s < segs.size(); ++s) {
        const ScaleSegment& seg = segs[s];
        const std::vector<double> nodes =
            detail::graded_nodes(seg.span.lower(), seg.span.upper(), counts[s], seg.grading, seg.cluster);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double tau = nodes[i];
            if (i > 0 && !(tau > nodes[i - 1])) throw ArgumentError("fence grid collapses below double resolution");
            const double g = detail::sample(seg.g, tau);
            if (i == 0 && !fence.points.empty()) {
                const FencePoint& prev = fence.points.back();
                if (prev.tau == tau && std::abs(prev.g - g) <= 1e-12 * (1.0 + std::abs(g))) continue;
                fence.jump_at = fence.points.size();
            }
            fence.points.push_back({tau, g, detail::sample(f, tau)});
        }
    }
    return fence;
}

/// Projection of the fence onto one wall and the trapezoidal area under it.
/// On the (g, f) wall the area is the signed sum of f * dg, so a decreasing
/// branch (negative Feller coefficient) contributes negatively.
inline Shadow shadow(const Fence& fence, Wall wall) {
    if (fence.points.size() < 2) throw DomainError("degenerate fence: fewer than two points");
    Shadow out{wall, {}, 0.0};
    out.boundary.reserve(fence.points.size());
    for (const FencePoint& p : fence.points) out.boundary.emplace_back(wall == Wall::tau_f ? p.tau : p.g, p.f);

    const auto [lo, hi] = std::minmax_element(out.boundary.begin(), out.boundary.end(),
                                              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (!(hi->first - lo->first > 0.0)) throw DomainError("degenerate fence: projected range has zero width");

    CompensatedSum area;
    for (std::size_t i = 1; i < out.boundary.size(); ++i) {
        if (fence.jump_at && *fence.jump_at == i) continue;
        const auto& [x0, f0] = out.boundary[i - 1];
        const auto& [x1, f1] = out.boundary[i];
        area.add(0.5 * (f0 + f1) * (x1 - x0));
    }
    out.area = area.value();
    return out;
}

/// Fences for the left-sided integral at t = dt, 2 dt, ..., up to t_max,
/// each rebuilt from scratch, with their (g, f) shadows.
template <RealFunction F>
SnapshotSeries snapshot_series(const F& f, Order alpha, double t_max, double dt, std::size_t n) {
    if (!(dt > 0.0) || !(dt <= t_max) || !std::isfinite(t_max)) {
        throw ArgumentError("snapshot_series needs 0 < dt <= t_max");
    }
    const auto count = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    SnapshotSeries series{{}, dt};
    series.snapshots.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        const double t = static_cast<double>(k) * dt;
        Fence fence = build_fence(f, TimeScale{LeftRL{alpha}, t}, n);
        Shadow gf = shadow(fence, Wall::g_f);
        series.snapshots.push_back({t, std::move(fence), std::move(gf)});
    }
    return series;
}

/// One fence per anchor time, showing how the fence basis moves with t.
template <RealFunction F>
std::vector<Fence> fence_basis_track(const F& f, const ScaleFamily& family, const std::vector<double>& t_values,
                                     std::size_t n) {
    for (std::size_t i = 1; i < t_values.size(); ++i) {
        if (!(t_values[i] > t_values[i - 1])) throw ArgumentError("fence_basis_track needs increasing t values");
    }
    std::vector<Fence> out;
    out.reserve(t_values.size());
    for (double t : t_values) out.push_back(build_fence(f, TimeScale{family, t}, n));
    return out;
}

}  // namespace fracshadow
