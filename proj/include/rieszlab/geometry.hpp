#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rieszlab/measure.hpp"
#include "rieszlab/vec.hpp"

namespace rieszlab {

// =============================================================================
// Affine frames
// =============================================================================

/// Base point plus an orthonormal basis of the directions spanned by a point
/// tuple. basis[j] is the normalized component of point j+1 orthogonal to the
/// span of the earlier points, so prefixes of the basis span the nested hulls
/// of the generating tuple.
struct AffineFrame {
    Vec base;
    std::vector<Vec> basis;

    int dim() const { return static_cast<int>(basis.size()); }
    int ambient_dim() const { return base.dim(); }

    /// Projection of a displacement onto the linear span of the basis.
    Vec project(const Vec& delta) const;

    /// |Pi(delta)|^2 without materializing the projection.
    double projected_norm2(const Vec& delta) const;

    /// Distance from an ambient point to the affine hull base + span.
    double dist(const Vec& point) const;
};

/// Order-preserving modified Gram-Schmidt (re-orthogonalized) over the
/// displacements points[j] - points[0]. Throws SpreadDegeneracyError when a
/// pivot falls below 1e-10 times the tuple diameter.
AffineFrame orthonormalize(std::span<const Vec> points);

inline double dist_to_affine(const Vec& z, const AffineFrame& frame) { return frame.dist(z); }

// =============================================================================
// Spread selection
// =============================================================================

/// A well-spread tuple y_0..y_{count-1} inside B(x0, r): y_0 is the candidate
/// nearest x0 and each later y_j maximizes the distance to the hull of its
/// predecessors. hull_distances[j-1] = d(y_j, hull(y_0..y_{j-1})).
struct SpreadSelection {
    std::vector<std::uint32_t> ids;  // candidate ids in pick order
    std::vector<Vec> points;
    std::vector<double> hull_distances;
    double spread_ratio = 0.0;  // min hull distance / r
    Vec x0;
    double r = 0.0;
};

/// Greedy farthest-from-hull selection among candidates (points with stable
/// ids for tie-breaking) restricted to the open ball B(x0, r). The greedy
/// restarts from a deterministic set of first points (nearest to x0, then a
/// stride sample of the ball) and keeps the best spread ratio.
SpreadSelection select_spread_points(std::span<const Vec> candidates,
                                     std::span<const std::uint32_t> ids, const Vec& x0, double r,
                                     int count);

/// Convenience overload over a measure's atoms.
SpreadSelection select_spread_points(const DiscreteMeasure& mu,
                                     std::span<const std::uint32_t> candidate_ids, const Vec& x0,
                                     double r, int count);

}  // namespace rieszlab
