#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rieszlab/geometry.hpp"
#include "rieszlab/measure.hpp"
#include "rieszlab/smoothing.hpp"
#include "rieszlab/vec.hpp"

namespace rieszlab {

/// Value of a (truncated or smoothed) transform at one point.
struct RieszValue {
    Vec value;
    std::uint32_t atom_count = 0;  // atoms contributing to the sum
    bool below_floor = false;      // scale fell under the measure's radius floor
};

/// Truncated transform: sum over |x - y| > eps of w (x-y)/|x-y|^(s+1).
/// Fixed-order pairwise summation over the canonical atom order.
RieszValue truncated_riesz(const DiscreteMeasure& mu, const Vec& x, double eps, double s);

/// Mollified transform: sum of w k(x - y) with the profile's kernel. Atoms
/// beyond the kernel support are skipped via the spatial index; an atom at
/// x itself contributes k(0) = 0.
RieszValue smoothed_riesz(const DiscreteMeasure& mu, const Vec& x, double eps,
                          const SmoothingProfile& profile);

/// As above, with the atom at `exclude` (exact position match) dropped from
/// the sum. Used by the local expansion, which treats the base atom as the
/// expansion origin rather than as mass.
RieszValue smoothed_riesz_excluding(const DiscreteMeasure& mu, const Vec& x, double eps,
                                    const SmoothingProfile& profile,
                                    std::optional<Vec> exclude);

/// First-order term of the expansion of the smoothed transform around a base
/// point, evaluated at offset x (|x| < eps/4): the sum over atoms y != base of
///
///   w / |y|^(s+1) [ phi(|y|^2/eps^2) (x - (s+1)(x.y) y / |y|^2)
///                   + phi'(|y|^2/eps^2) 2 (x.y) y / eps^2 ]
///
/// with y taken relative to the base point.
Vec taylor_main_term(const DiscreteMeasure& mu, const Vec& base, const Vec& offset, double eps,
                     const SmoothingProfile& profile);

/// Exact split R(x) - R(base) = mainTerm + residual, with the base atom
/// excluded from both sides so the residual measures the genuine quadratic
/// remainder of the cloud around the base.
struct TaylorSplit {
    Vec delta;      // R(x) - R(base), base atom excluded
    Vec main_term;  // first-order term
    Vec residual;   // delta - main_term (exact by construction)
    double bound_ratio = 0.0;  // |residual| eps^2 / (theta(base,3eps) |x-base|^2)
    bool vacuous = false;      // theta(base, 3eps) == 0
};

TaylorSplit taylor_split(const DiscreteMeasure& mu, const Vec& base, const Vec& x, double eps,
                         const SmoothingProfile& profile);

/// Scalar contraction of the expansion along an orthonormal frame of
/// dimension n+1 anchored at y0:
///
///   U(y0) = sum_{z != y0} w / |z-y0|^(s+1) [ phi(u) ((n+1) - (s+1) p^2/|z-y0|^2)
///                                            + 2 phi'(u) p^2 / eps^2 ]
///
/// where u = |z-y0|^2/eps^2 and p^2 = |Pi(z-y0)|^2 is the squared projection
/// onto the frame span. When the support lies inside B(y0, eps) this equals
/// (n+1) mu(B) / eps^(n... ) exactly: (n+1) mu(B(y0,eps)) / eps^(s+1).
double u_functional(const DiscreteMeasure& mu, const Vec& y0, const AffineFrame& frame, double eps,
                    const SmoothingProfile& profile);

/// Smoothed transform sampled over a descending dyadic eps grid, plus the
/// tail oscillation curve osc_tail[k] = max pairwise |v_i - v_j| over i,j>=k.
struct PvScan {
    std::vector<double> eps;        // descending
    std::vector<RieszValue> values;
    std::vector<double> osc_tail;
    bool truncated_grid = false;    // grid was clipped at the radius floor
};

PvScan pv_scan(const DiscreteMeasure& mu, const Vec& x, std::span<const double> eps_grid,
               const SmoothingProfile& profile);

/// Convenience: dyadic grid of `generations` entries descending from eps_max.
std::vector<double> dyadic_eps_grid(double eps_max, int generations);

}  // namespace rieszlab
