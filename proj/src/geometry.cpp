#include "rieszlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rieszlab/errors.hpp"

namespace rieszlab {

// =============================================================================
// AffineFrame
// =============================================================================

Vec AffineFrame::project(const Vec& delta) const {
    Vec out = Vec::zero(delta.dim());
    for (const Vec& e : basis) out += e * e.dot(delta);
    return out;
}

double AffineFrame::projected_norm2(const Vec& delta) const {
    double acc = 0.0;
    for (const Vec& e : basis) {
        const double c = e.dot(delta);
        acc += c * c;
    }
    return acc;
}

double AffineFrame::dist(const Vec& point) const {
    Vec res = point - base;
    for (const Vec& e : basis) res -= e * e.dot(res);
    return res.norm();
}

AffineFrame orthonormalize(std::span<const Vec> points) {
    if (points.size() < 2) throw PreconditionError("orthonormalize needs at least two points");

    double diameter = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            diameter = std::max(diameter, points[i].dist(points[j]));
    const double pivot_tol = 1e-10 * std::max(diameter, 1e-300);

    AffineFrame frame;
    frame.base = points[0];
    for (std::size_t j = 1; j < points.size(); ++j) {
        Vec v = points[j] - frame.base;
        // Two orthogonalization passes keep the basis orthonormal to ~1e-15
        // even when the new direction is nearly dependent.
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& e : frame.basis) v -= e * e.dot(v);
        const double len = v.norm();
        if (len < pivot_tol)
            throw SpreadDegeneracyError(
                "affine degeneracy: point " + std::to_string(j) +
                    " lies in the hull of its predecessors (achieved dimension " +
                    std::to_string(frame.basis.size()) + ")",
                static_cast<int>(frame.basis.size()));
        frame.basis.push_back(v * (1.0 / len));
    }
    return frame;
}

// =============================================================================
// Spread selection
// =============================================================================

namespace {

// One greedy pass from a fixed start index into in_ball.
SpreadSelection greedy_from(std::span<const Vec> candidates, std::span<const std::uint32_t> ids,
                            const std::vector<std::size_t>& in_ball, std::size_t start,
                            const Vec& x0, double r, int count) {
    SpreadSelection sel;
    sel.x0 = x0;
    sel.r = r;
    sel.ids.push_back(ids[start]);
    sel.points.push_back(candidates[start]);

    const double degenerate_tol = 1e-10 * std::max(r, 1.0);
    while (static_cast<int>(sel.points.size()) < count) {
        double far_d = -1.0;
        std::size_t far_i = in_ball[0];
        if (sel.points.size() == 1) {
            for (std::size_t i : in_ball) {
                const double d = candidates[i].dist(sel.points[0]);
                if (d > far_d || (d == far_d && ids[i] < ids[far_i])) {
                    far_d = d;
                    far_i = i;
                }
            }
        } else {
            const AffineFrame frame = orthonormalize(sel.points);
            for (std::size_t i : in_ball) {
                const double d = frame.dist(candidates[i]);
                if (d > far_d || (d == far_d && ids[i] < ids[far_i])) {
                    far_d = d;
                    far_i = i;
                }
            }
        }
        if (far_d <= degenerate_tol)
            throw SpreadDegeneracyError(
                "spread selection degenerate: all ball candidates lie in a hull of dimension " +
                    std::to_string(sel.points.size() - 1),
                static_cast<int>(sel.points.size()) - 1);
        sel.ids.push_back(ids[far_i]);
        sel.points.push_back(candidates[far_i]);
        sel.hull_distances.push_back(far_d);
    }

    double min_d = std::numeric_limits<double>::infinity();
    for (double d : sel.hull_distances) min_d = std::min(min_d, d);
    sel.spread_ratio = min_d / r;
    return sel;
}

}  // namespace

SpreadSelection select_spread_points(std::span<const Vec> candidates,
                                     std::span<const std::uint32_t> ids, const Vec& x0, double r,
                                     int count) {
    if (candidates.size() != ids.size())
        throw PreconditionError("select_spread_points: candidates/ids size mismatch");
    if (count < 2) throw PreconditionError("select_spread_points needs count >= 2");
    if (!(r > 0.0)) throw PreconditionError("select_spread_points needs r > 0");

    // Restrict to the open ball in ascending id order, so the whole selection
    // is invariant under reshuffles of the candidate arrays.
    std::vector<std::size_t> in_ball;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].dist2(x0) < r * r) in_ball.push_back(i);
    std::sort(in_ball.begin(), in_ball.end(),
              [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    if (in_ball.size() < static_cast<std::size_t>(count))
        throw PreconditionError("select_spread_points: fewer than count candidates in the ball");

    // Restart set: the candidate nearest x0 first (ties by smaller id), then
    // a deterministic stride sample of the ball. A single forced start can
    // forfeit more than half the achievable spread, so the best restart wins;
    // ties keep the earliest start.
    std::size_t nearest = in_ball[0];
    for (std::size_t i : in_ball) {
        const double d = candidates[i].dist2(x0);
        const double db = candidates[nearest].dist2(x0);
        if (d < db || (d == db && ids[i] < ids[nearest])) nearest = i;
    }
    std::vector<std::size_t> starts{nearest};
    constexpr std::size_t kMaxRestarts = 32;
    const std::size_t stride = std::max<std::size_t>(1, in_ball.size() / kMaxRestarts);
    for (std::size_t j = 0; j < in_ball.size() && starts.size() <= kMaxRestarts; j += stride)
        if (in_ball[j] != nearest) starts.push_back(in_ball[j]);

    SpreadSelection best;
    bool have = false;
    int achieved_dim = 0;
    std::string first_error;
    for (std::size_t start : starts) {
        try {
            SpreadSelection sel = greedy_from(candidates, ids, in_ball, start, x0, r, count);
            if (!have || sel.spread_ratio > best.spread_ratio) {
                best = std::move(sel);
                have = true;
            }
        } catch (const SpreadDegeneracyError& e) {
            if (first_error.empty()) {
                first_error = e.what();
                achieved_dim = e.achieved_dimension();
            }
        }
    }
    if (!have) throw SpreadDegeneracyError(first_error, achieved_dim);
    return best;
}

SpreadSelection select_spread_points(const DiscreteMeasure& mu,
                                     std::span<const std::uint32_t> candidate_ids, const Vec& x0,
                                     double r, int count) {
    std::vector<Vec> pts;
    pts.reserve(candidate_ids.size());
    for (std::uint32_t id : candidate_ids) pts.push_back(mu.atom(id));
    return select_spread_points(pts, candidate_ids, x0, r, count);
}

}  // namespace rieszlab
