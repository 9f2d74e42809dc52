#include "rieszlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rieszlab/errors.hpp"
#include "rieszlab/summation.hpp"

namespace rieszlab {

// =============================================================================
// AmbientParams
// =============================================================================

AmbientParams AmbientParams::make(int m, double s) {
    if (m < 1 || m > kMaxDim) throw PreconditionError("ambient dimension m must be in [1, 8]");
    if (!(s > 0.0) || s > static_cast<double>(m))
        throw PreconditionError("exponent s must satisfy 0 < s <= m");
    // Smallest integer n with s <= n+1.
    int n = static_cast<int>(std::ceil(s)) - 1;
    if (s <= static_cast<double>(n)) --n;  // guard against ceil edge cases
    AmbientParams p;
    p.m = m;
    p.s = s;
    p.n = n;
    return p;
}

// =============================================================================
// DiscreteMeasure
// =============================================================================

DiscreteMeasure::DiscreteMeasure(std::vector<double> positions, std::vector<double> weights,
                                 int dim, double resolution, bool degenerate_overlap,
                                 double radius_floor_factor)
    : dim_(dim),
      positions_(std::move(positions)),
      weights_(std::move(weights)),
      resolution_(resolution),
      degenerate_overlap_(degenerate_overlap),
      radius_floor_factor_(radius_floor_factor) {
    if (dim_ < 1 || dim_ > kMaxDim) throw BuildError("measure dimension out of range");
    if (weights_.empty()) throw BuildError("measure has no atoms");
    if (positions_.size() != weights_.size() * static_cast<std::size_t>(dim_))
        throw BuildError("positions/weights size mismatch");
    if (!(resolution_ > 0.0)) throw BuildError("resolution must be positive");
    for (double w : weights_)
        if (!(w >= 0.0)) throw BuildError("negative atom weight");

    total_mass_ = pairwise_sum(weights_.size(), [&](std::size_t i) { return weights_[i]; });
    if (!(total_mass_ > 0.0)) throw BuildError("total mass must be positive");

    double lo[kMaxDim], hi[kMaxDim];
    for (int a = 0; a < dim_; ++a) {
        lo[a] = std::numeric_limits<double>::infinity();
        hi[a] = -std::numeric_limits<double>::infinity();
    }
    for (std::uint32_t i = 0; i < size(); ++i) {
        const double* p = &positions_[static_cast<std::size_t>(i) * dim_];
        for (int a = 0; a < dim_; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    double diag2 = 0.0;
    for (int a = 0; a < dim_; ++a) diag2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
    diameter_hint_ = std::sqrt(diag2);

    index_ = SpatialIndex(positions_, dim_);
}

double DiscreteMeasure::ball_mass(const Vec& x, double r) const {
    if (!(r > 0.0)) throw PreconditionError("ball_mass requires r > 0");
    std::vector<BallHit> hits;
    index_.ball_query(x, r, hits);
    return pairwise_sum(hits.size(), [&](std::size_t i) { return weights_[hits[i].index]; });
}

std::vector<double> DiscreteMeasure::ball_mass_profile(const Vec& x,
                                                       std::span<const double> radii) const {
    double rmax = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) throw PreconditionError("ball_mass_profile requires positive radii");
        rmax = std::max(rmax, r);
    }
    std::vector<BallHit> hits;
    index_.ball_query(x, rmax, hits);

    std::vector<double> out(radii.size());
    std::vector<double> selected;
    selected.reserve(hits.size());
    for (std::size_t j = 0; j < radii.size(); ++j) {
        const double r2 = radii[j] * radii[j];
        selected.clear();
        for (const BallHit& h : hits)
            if (h.dist2 < r2) selected.push_back(weights_[h.index]);
        out[j] = pairwise_sum(selected.size(), [&](std::size_t i) { return selected[i]; });
    }
    return out;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
    if (!(factor > 0.0)) throw PreconditionError("scale factor must be positive");
    std::vector<double> w = weights_;
    for (double& x : w) x *= factor;
    return DiscreteMeasure(positions_, std::move(w), dim_, resolution_, degenerate_overlap_,
                           radius_floor_factor_);
}

// =============================================================================
// Similarities
// =============================================================================

Mat Mat::identity(int dim) {
    Mat m;
    m.dim = dim;
    for (int i = 0; i < dim; ++i) m.a[static_cast<std::size_t>(i * kMaxDim + i)] = 1.0;
    return m;
}

Mat Mat::plane_rotation(int dim, int i, int j, double angle) {
    Mat m = identity(dim);
    const double c = std::cos(angle), s = std::sin(angle);
    m.a[static_cast<std::size_t>(i * kMaxDim + i)] = c;
    m.a[static_cast<std::size_t>(j * kMaxDim + j)] = c;
    m.a[static_cast<std::size_t>(i * kMaxDim + j)] = -s;
    m.a[static_cast<std::size_t>(j * kMaxDim + i)] = s;
    return m;
}

Vec Mat::apply(const Vec& v) const {
    Vec r(dim);
    for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < dim; ++j) acc += a[static_cast<std::size_t>(i * kMaxDim + j)] * v[j];
        r[i] = acc;
    }
    return r;
}

Vec Similarity::apply(const Vec& x) const {
    Vec y = rotation ? rotation->apply(x) : x;
    return y * ratio + translation;
}

Vec Similarity::fixed_point(int dim) const {
    // Solve (I - ratio*R) p = translation by Gaussian elimination with
    // partial pivoting; the system is tiny and well conditioned (ratio < 1).
    double a[kMaxDim][kMaxDim + 1] = {};
    const Mat R = rotation ? *rotation : Mat::identity(dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j)
            a[i][j] = (i == j ? 1.0 : 0.0) - ratio * R.a[static_cast<std::size_t>(i * kMaxDim + j)];
        a[i][dim] = translation[i];
    }
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        for (int j = 0; j <= dim; ++j) std::swap(a[col][j], a[piv][j]);
        for (int r = col + 1; r < dim; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int j = col; j <= dim; ++j) a[r][j] -= f * a[col][j];
        }
    }
    Vec p(dim);
    for (int i = dim - 1; i >= 0; --i) {
        double acc = a[i][dim];
        for (int j = i + 1; j < dim; ++j) acc -= a[i][j] * p[j];
        p[i] = acc / a[i][i];
    }
    return p;
}

double IfsSpec::similarity_dimension() const {
    auto f = [&](double t) {
        double acc = 0.0;
        for (const Similarity& s : maps) acc += std::pow(s.ratio, t);
        return acc - 1.0;
    };
    double lo = 1e-9, hi = 64.0;
    if (f(lo) < 0.0) return 0.0;  // fewer than one effective map
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

IfsSpec IfsSpec::cantor(double ratio, int depth) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw PreconditionError("cantor ratio must be in (0,1)");
    IfsSpec spec;
    spec.depth = depth;
    Similarity left;
    left.ratio = ratio;
    left.translation = Vec{0.0};
    Similarity right;
    right.ratio = ratio;
    right.translation = Vec{1.0 - ratio};
    spec.maps = {left, right};
    return spec;
}

// =============================================================================
// IFS generation
// =============================================================================

DiscreteMeasure build_ifs_measure(const IfsSpec& spec, const AmbientParams& ambient) {
    if (spec.maps.empty()) throw BuildError("IFS needs at least one map");
    if (spec.depth < 1) throw BuildError("IFS depth must be >= 1");
    for (const Similarity& s : spec.maps)
        if (!(s.ratio > 0.0 && s.ratio < 1.0))
            throw BuildError("similarity ratios must lie in (0,1)");

    std::uint64_t count = 1;
    for (int d = 0; d < spec.depth; ++d) {
        count *= spec.maps.size();
        if (count > kMaxGeneratedAtoms) throw BuildError("IFS atom count exceeds cap");
    }

    const int m = ambient.m;
    std::vector<Vec> pts{spec.maps[0].fixed_point(m)};
    for (int d = 0; d < spec.depth; ++d) {
        std::vector<Vec> next;
        next.reserve(pts.size() * spec.maps.size());
        for (const Vec& p : pts)
            for (const Similarity& s : spec.maps) next.push_back(s.apply(p));
        pts = std::move(next);
    }

    // Canonical order: lexicographic by position.
    std::vector<std::uint32_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        for (int a = 0; a < m; ++a) {
            if (pts[x][a] != pts[y][a]) return pts[x][a] < pts[y][a];
        }
        return x < y;
    });

    // Merge coincident atoms. Images of overlapping maps land within rounding
    // of each other; the tolerance is relative to the attractor extent.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec& p : pts)
        for (int a = 0; a < m; ++a) {
            lo = std::min(lo, p[a]);
            hi = std::max(hi, p[a]);
        }
    const double merge_tol = 1e-9 * std::max(1.0, hi - lo);
    const double w0 = 1.0 / static_cast<double>(pts.size());

    std::vector<double> positions;
    std::vector<double> weights;
    bool merged_any = false;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        const Vec& base = pts[order[i]];
        double w = w0;
        while (j < order.size()) {
            const Vec& q = pts[order[j]];
            bool close = true;
            for (int a = 0; a < m && close; ++a) close = std::abs(q[a] - base[a]) <= merge_tol;
            if (!close) break;
            w += w0;
            merged_any = true;
            ++j;
        }
        for (int a = 0; a < m; ++a) positions.push_back(base[a]);
        weights.push_back(w);
        i = j;
    }

    double resolution = 1.0;  // single-atom convention: unit scale
    if (weights.size() >= 2) {
        SpatialIndex probe(positions, m);
        resolution = probe.min_pairwise_gap();
    }

    return DiscreteMeasure(std::move(positions), std::move(weights), m, resolution, merged_any);
}

// =============================================================================
// Rectifiable generators
// =============================================================================

RectifiableSpec RectifiableSpec::segment(const Vec& a, const Vec& b) {
    RectifiableSpec s;
    s.kind = Kind::Segment;
    s.a = a;
    s.b = b;
    return s;
}

RectifiableSpec RectifiableSpec::unit_segment(int dim) {
    Vec a(dim), b(dim);
    b[0] = 1.0;
    return segment(a, b);
}

RectifiableSpec RectifiableSpec::circle(const Vec& center, double radius, int axis1, int axis2) {
    RectifiableSpec s;
    s.kind = Kind::Circle;
    s.center = center;
    s.radius = radius;
    s.axis1 = axis1;
    s.axis2 = axis2;
    return s;
}

RectifiableSpec RectifiableSpec::plane_patch(const Vec& base, std::vector<Vec> axes,
                                             std::vector<double> extents) {
    RectifiableSpec s;
    s.kind = Kind::PlanePatch;
    s.base = base;
    s.axes = std::move(axes);
    s.extents = std::move(extents);
    return s;
}

DiscreteMeasure build_rectifiable_measure(const RectifiableSpec& spec, double resolution_target) {
    if (!(resolution_target > 0.0)) throw BuildError("resolution target must be positive");

    switch (spec.kind) {
        case RectifiableSpec::Kind::Segment: {
            const int m = spec.a.dim();
            const Vec d = spec.b - spec.a;
            const double len = d.norm();
            if (!(len > 0.0)) throw BuildError("zero-length segment");
            const std::uint64_t count =
                std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(len / resolution_target)));
            if (count > kMaxGeneratedAtoms) throw BuildError("segment atom count exceeds cap");
            const double w = len / static_cast<double>(count);
            std::vector<double> positions, weights;
            positions.reserve(count * static_cast<std::uint64_t>(m));
            weights.reserve(count);
            for (std::uint64_t j = 0; j < count; ++j) {
                const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(count);
                const Vec p = spec.a + d * t;
                for (int a = 0; a < m; ++a) positions.push_back(p[a]);
                weights.push_back(w);
            }
            return DiscreteMeasure(std::move(positions), std::move(weights), m,
                                   len / static_cast<double>(count));
        }
        case RectifiableSpec::Kind::Circle: {
            const int m = spec.center.dim();
            if (!(spec.radius > 0.0)) throw BuildError("circle radius must be positive");
            if (m < 2) throw BuildError("circle needs ambient dimension >= 2");
            const double len = 2.0 * M_PI * spec.radius;
            const std::uint64_t count =
                std::max<std::uint64_t>(3, static_cast<std::uint64_t>(std::ceil(len / resolution_target)));
            if (count > kMaxGeneratedAtoms) throw BuildError("circle atom count exceeds cap");
            const double w = len / static_cast<double>(count);
            std::vector<double> positions, weights;
            for (std::uint64_t j = 0; j < count; ++j) {
                const double ang = 2.0 * M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(count);
                Vec p = spec.center;
                p[spec.axis1] += spec.radius * std::cos(ang);
                p[spec.axis2] += spec.radius * std::sin(ang);
                for (int a = 0; a < m; ++a) positions.push_back(p[a]);
                weights.push_back(w);
            }
            const double chord = 2.0 * spec.radius * std::sin(M_PI / static_cast<double>(count));
            return DiscreteMeasure(std::move(positions), std::move(weights), m, chord);
        }
        case RectifiableSpec::Kind::PlanePatch: {
            const int m = spec.base.dim();
            const std::size_t k = spec.axes.size();
            if (k == 0 || spec.extents.size() != k) throw BuildError("patch needs axes with extents");
            std::vector<std::uint64_t> counts(k);
            std::uint64_t total = 1;
            double cell_area = 1.0;
            double min_spacing = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < k; ++a) {
                if (!(spec.extents[a] > 0.0)) throw BuildError("zero-extent patch axis");
                counts[a] = std::max<std::uint64_t>(
                    1, static_cast<std::uint64_t>(std::ceil(spec.extents[a] / resolution_target)));
                total *= counts[a];
                if (total > kMaxGeneratedAtoms) throw BuildError("patch atom count exceeds cap");
                const double spacing = spec.extents[a] / static_cast<double>(counts[a]);
                cell_area *= spacing;
                min_spacing = std::min(min_spacing, spacing);
            }
            std::vector<double> positions, weights;
            std::vector<std::uint64_t> idx(k, 0);
            for (std::uint64_t cell = 0; cell < total; ++cell) {
                Vec p = spec.base;
                std::uint64_t rem = cell;
                for (std::size_t a = 0; a < k; ++a) {
                    const std::uint64_t ia = rem % counts[a];
                    rem /= counts[a];
                    const double t =
                        (static_cast<double>(ia) + 0.5) * (spec.extents[a] / static_cast<double>(counts[a]));
                    p += spec.axes[a] * t;
                }
                for (int a = 0; a < m; ++a) positions.push_back(p[a]);
                weights.push_back(cell_area);
            }
            return DiscreteMeasure(std::move(positions), std::move(weights), m, min_spacing);
        }
    }
    throw BuildError("unknown rectifiable kind");
}

// =============================================================================
// Density queries
// =============================================================================

double density(const DiscreteMeasure& mu, const Vec& x, double r, double s) {
    if (!(r > 0.0)) throw PreconditionError("density requires r > 0");
    return mu.ball_mass(x, r) / std::pow(r, s);
}

DensityProfile density_profile(const DiscreteMeasure& mu, const Vec& center,
                               std::vector<double> radii_descending, double s) {
    for (std::size_t i = 0; i < radii_descending.size(); ++i) {
        if (i > 0 && !(radii_descending[i] < radii_descending[i - 1]))
            throw PreconditionError("density profile radii must be strictly decreasing");
        if (radii_descending[i] < mu.resolution())
            throw PreconditionError("density profile radius below the measure resolution");
    }
    DensityProfile prof;
    prof.center = center;
    prof.radii = std::move(radii_descending);
    const std::vector<double> masses = mu.ball_mass_profile(center, prof.radii);
    prof.thetas.resize(prof.radii.size());
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
        prof.thetas[i] = masses[i] / std::pow(prof.radii[i], s);
    return prof;
}

std::vector<double> dyadic_refined_grid(double lo, double hi, int per_octave) {
    if (!(lo > 0.0) || !(hi >= lo)) throw PreconditionError("grid needs 0 < lo <= hi");
    if (per_octave < 1) throw PreconditionError("per_octave must be >= 1");
    const double step = std::log2(hi / lo);
    const int n = std::max(1, static_cast<int>(std::ceil(step * per_octave)));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        grid.push_back(lo * std::exp2(step * static_cast<double>(j) / static_cast<double>(n)));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

UpperDensityEstimate upper_density_estimate(const DiscreteMeasure& mu, const Vec& x, double s,
                                            std::span<const double> radii_grid) {
    const double floor = mu.radius_floor();
    std::vector<double> used;
    for (double r : radii_grid)
        if (r >= floor) used.push_back(r);
    if (used.empty())
        throw PreconditionError("upper_density_estimate: radii grid entirely below the radius floor");
    const std::vector<double> masses = mu.ball_mass_profile(x, used);
    double best = 0.0;
    for (std::size_t i = 0; i < used.size(); ++i)
        best = std::max(best, masses[i] / std::pow(used[i], s));
    return {best, std::move(used)};
}

std::vector<double> limsup_radii_grid(const DiscreteMeasure& mu, int octaves, int per_octave) {
    const double lo = mu.radius_floor();
    return dyadic_refined_grid(lo, lo * std::exp2(octaves), per_octave);
}

GrowthConstant growth_constant(const DiscreteMeasure& mu, double s, std::span<const Vec> sample,
                               double r0, int per_octave) {
    if (sample.empty()) throw PreconditionError("growth_constant requires a nonempty sample");
    if (!(r0 > 0.0)) throw PreconditionError("growth_constant requires r0 > 0");
    const double floor = std::min(mu.radius_floor(), r0);
    const std::vector<double> grid = dyadic_refined_grid(floor, r0, per_octave);
    GrowthConstant out{0.0, sample[0], grid[0]};
    for (const Vec& x : sample) {
        const std::vector<double> masses = mu.ball_mass_profile(x, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double theta = masses[i] / std::pow(grid[i], s);
            if (theta > out.value) {
                out.value = theta;
                out.arg_point = x;
                out.arg_radius = grid[i];
            }
        }
    }
    return out;
}

}  // namespace rieszlab
