#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rieszlab/spatial_index.hpp"
#include "rieszlab/vec.hpp"

namespace rieszlab {

// =============================================================================
// Ambient parameters
// =============================================================================

/// Ambient dimension m, exponent s in (0, m], and the integer n with
/// n < s <= n+1. n+1 is the frame dimension used by the spread functional.
struct AmbientParams {
    int m = 1;
    double s = 1.0;
    int n = 0;

    /// Validates 1 <= m <= kMaxDim and 0 < s <= m, and derives n.
    static AmbientParams make(int m, double s);

    bool integer_exponent() const { return s == static_cast<double>(n + 1); }
};

// =============================================================================
// Discrete measures
// =============================================================================

/// Weighted point cloud with a spatial index for exact ball-mass queries.
/// Immutable after construction; all queries are pure and thread-safe.
class DiscreteMeasure {
public:
    /// positions: count*dim flat array in the canonical atom order.
    /// resolution must be > 0 (pass an analytic spacing when known, or use
    /// measured_resolution()).
    DiscreteMeasure(std::vector<double> positions, std::vector<double> weights, int dim,
                    double resolution, bool degenerate_overlap = false,
                    double radius_floor_factor = 4.0);

    int dim() const { return dim_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(weights_.size()); }
    double total_mass() const { return total_mass_; }
    double resolution() const { return resolution_; }
    bool degenerate_overlap() const { return degenerate_overlap_; }

    /// Below this radius the cloud no longer approximates the target measure;
    /// density-style queries must stay at or above it.
    double radius_floor() const { return radius_floor_factor_ * resolution_; }
    double radius_floor_factor() const { return radius_floor_factor_; }

    Vec atom(std::uint32_t i) const {
        return Vec::from(std::span<const double>(&positions_[static_cast<std::size_t>(i) * dim_],
                                                 static_cast<std::size_t>(dim_)));
    }
    double weight(std::uint32_t i) const { return weights_[i]; }
    std::span<const double> positions() const { return positions_; }
    std::span<const double> weights() const { return weights_; }

    const SpatialIndex& index() const { return index_; }

    /// Axis-aligned bounding box diagonal length.
    double diameter_hint() const { return diameter_hint_; }

    /// mu(B(x, r)) over the open ball, computed as the pairwise sum of the
    /// weights of qualifying atoms in ascending index order. Equals a linear
    /// scan bit-for-bit.
    double ball_mass(const Vec& x, double r) const;

    /// ball_mass at several radii from one traversal at max(radii). Each
    /// entry is bit-identical to the corresponding single-radius call.
    std::vector<double> ball_mass_profile(const Vec& x, std::span<const double> radii) const;

    /// A copy with every weight scaled by `factor` (same atoms, same order).
    DiscreteMeasure scaled(double factor) const;

private:
    int dim_;
    std::vector<double> positions_;
    std::vector<double> weights_;
    double total_mass_;
    double resolution_;
    bool degenerate_overlap_;
    double radius_floor_factor_;
    double diameter_hint_;
    SpatialIndex index_;
};

// =============================================================================
// Generators
// =============================================================================

/// Small square matrix for optional similarity rotations.
struct Mat {
    int dim = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    static Mat identity(int dim);
    /// Rotation by angle in the (i, j) coordinate plane.
    static Mat plane_rotation(int dim, int i, int j, double angle);
    Vec apply(const Vec& v) const;
};

/// One contracting similarity x -> ratio * R x + translation.
struct Similarity {
    double ratio = 0.5;
    Vec translation;
    std::optional<Mat> rotation;

    Vec apply(const Vec& x) const;
    /// Fixed point, solving (I - ratio*R) p = translation.
    Vec fixed_point(int dim) const;
};

/// Iterated-similarity generator with equal weight split per map per level.
struct IfsSpec {
    std::vector<Similarity> maps;
    int depth = 1;

    /// Solves sum_i ratio_i^t = 1 by bisection.
    double similarity_dimension() const;

    /// Two-map Cantor family on the line: x -> ratio*x and x -> ratio*x + (1-ratio).
    static IfsSpec cantor(double ratio, int depth);
};

/// Atom-count guard for IFS generation.
inline constexpr std::uint64_t kMaxGeneratedAtoms = 1u << 20;

/// Generates the depth-fold images of the first map's fixed point, merges
/// coincident atoms (flagging the overlap), sorts atoms lexicographically,
/// and measures the resolution as the smallest pairwise gap.
DiscreteMeasure build_ifs_measure(const IfsSpec& spec, const AmbientParams& ambient);

/// Uniform quadrature measures over simple rectifiable sets.
struct RectifiableSpec {
    enum class Kind { Segment, Circle, PlanePatch } kind = Kind::Segment;

    // Segment: from a to b.
    Vec a;
    Vec b;

    // Circle: center, radius, in the (axis1, axis2) coordinate plane.
    Vec center;
    double radius = 1.0;
    int axis1 = 0;
    int axis2 = 1;

    // PlanePatch: base point and k orthonormal axes with extents.
    Vec base;
    std::vector<Vec> axes;
    std::vector<double> extents;

    static RectifiableSpec segment(const Vec& a, const Vec& b);
    static RectifiableSpec unit_segment(int dim = 1);
    static RectifiableSpec circle(const Vec& center, double radius, int axis1 = 0, int axis2 = 1);
    static RectifiableSpec plane_patch(const Vec& base, std::vector<Vec> axes,
                                       std::vector<double> extents);
};

DiscreteMeasure build_rectifiable_measure(const RectifiableSpec& spec, double resolution_target);

// =============================================================================
// Density queries
// =============================================================================

inline double ball_mass(const DiscreteMeasure& mu, const Vec& x, double r) {
    return mu.ball_mass(x, r);
}

/// theta^s(x, r) = mu(B(x, r)) / r^s.
double density(const DiscreteMeasure& mu, const Vec& x, double r, double s);

/// Strictly decreasing radii with the densities evaluated at each.
struct DensityProfile {
    Vec center;
    std::vector<double> radii;
    std::vector<double> thetas;
};

DensityProfile density_profile(const DiscreteMeasure& mu, const Vec& center,
                               std::vector<double> radii_descending, double s);

/// Ascending grid geometrically refined at per_octave points per factor two,
/// spanning [lo, hi] with both endpoints included.
std::vector<double> dyadic_refined_grid(double lo, double hi, int per_octave);

/// Grid proxy for the small-radius upper density at x: the largest density
/// over the supplied radii at or above the measure's radius floor. Throws if
/// the whole grid sits below the floor.
struct UpperDensityEstimate {
    double value;
    std::vector<double> radii_used;
};

UpperDensityEstimate upper_density_estimate(const DiscreteMeasure& mu, const Vec& x, double s,
                                            std::span<const double> radii_grid);

/// Default limsup-proxy grid: the lowest `octaves` octaves above the radius
/// floor, refined at per_octave points per octave.
std::vector<double> limsup_radii_grid(const DiscreteMeasure& mu, int octaves = 2,
                                      int per_octave = 16);

/// Empirical growth constant M: the largest density over sample points and a
/// refined radius grid spanning [radius floor, r0].
struct GrowthConstant {
    double value;
    Vec arg_point;
    double arg_radius;
};

GrowthConstant growth_constant(const DiscreteMeasure& mu, double s, std::span<const Vec> sample,
                               double r0, int per_octave = 16);

}  // namespace rieszlab
