#include "rieszlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rieszlab/errors.hpp"
#include "rieszlab/summation.hpp"

namespace rieszlab {

// =============================================================================
// Controlled-point filter
// =============================================================================

void FDeltaParams::default_osc_grid(const DiscreteMeasure& mu, int generations) {
    osc_eps_grid.clear();
    double e = eps0;
    const double floor = mu.radius_floor();
    for (int g = 0; g < generations && e >= floor; ++g, e *= 0.5) osc_eps_grid.push_back(e);
    if (osc_eps_grid.empty()) osc_eps_grid.push_back(eps0);
}

FDeltaMembership::FDeltaMembership(const DiscreteMeasure& mu, const FDeltaParams& params,
                                   const SmoothingProfile& profile)
    : mu_(mu), params_(params), profile_(profile) {
    if (params_.osc_eps_grid.empty())
        throw PreconditionError("FDeltaParams.osc_eps_grid must not be empty");
    for (double e : params_.osc_eps_grid)
        if (!(e > 0.0) || e > params_.eps0 * (1.0 + 1e-12))
            throw PreconditionError("osc_eps_grid must lie within (0, eps0]");
    const double floor = mu_.radius_floor();
    if (!(params_.r0 >= floor))
        throw PreconditionError("FDeltaParams.r0 below the measure's radius floor");
    density_grid_ = dyadic_refined_grid(floor, params_.r0, params_.per_octave);
    theta_grid_ = limsup_radii_grid(mu_, params_.theta_octaves, params_.per_octave);
    cache_.resize(mu_.size());
    ready_.assign(mu_.size(), 0);
}

const FDeltaStats& FDeltaMembership::stats(std::uint32_t atom) const {
    if (!ready_[atom]) {
        FDeltaStats st;
        const Vec x = mu_.atom(atom);

        const std::vector<double> theta_masses = mu_.ball_mass_profile(x, theta_grid_);
        for (std::size_t i = 0; i < theta_grid_.size(); ++i)
            st.theta_star =
                std::max(st.theta_star, theta_masses[i] / std::pow(theta_grid_[i], profile_.s()));

        const std::vector<double> masses = mu_.ball_mass_profile(x, density_grid_);
        for (std::size_t i = 0; i < density_grid_.size(); ++i)
            st.max_density =
                std::max(st.max_density, masses[i] / std::pow(density_grid_[i], profile_.s()));

        st.pass_growth = st.max_density <= 2.0 * st.theta_star;
        st.pass_cap = st.theta_star <= params_.c0;

        std::vector<Vec> vals;
        vals.reserve(params_.osc_eps_grid.size());
        for (double e : params_.osc_eps_grid)
            vals.push_back(smoothed_riesz(mu_, x, e, profile_).value);
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = i + 1; j < vals.size(); ++j)
                st.osc = std::max(st.osc, (vals[i] - vals[j]).norm());

        cache_[atom] = st;
        ready_[atom] = 1;
    }
    return cache_[atom];
}

bool FDeltaMembership::retained(std::uint32_t atom, double delta) const {
    const FDeltaStats& st = stats(atom);
    return st.pass_growth && st.pass_cap && st.osc <= delta;
}

void FDeltaMembership::prefetch_all() const {
    parallel_for(mu_.size(), [&](std::size_t i) { stats(static_cast<std::uint32_t>(i)); });
}

FDeltaResult f_delta_filter(const DiscreteMeasure& mu, const FDeltaParams& params,
                            const SmoothingProfile& profile) {
    FDeltaMembership membership(mu, params, profile);
    membership.prefetch_all();

    FDeltaResult out;
    out.delta = params.delta;
    out.stats.reserve(mu.size());
    for (std::uint32_t i = 0; i < mu.size(); ++i) {
        const FDeltaStats& st = membership.stats(i);
        out.stats.push_back(st);
        const bool pass_osc = st.osc <= params.delta;
        if (st.pass_growth && st.pass_cap && pass_osc) {
            out.retained.push_back(i);
        } else {
            if (!st.pass_growth) ++out.reject_growth;
            if (!pass_osc) ++out.reject_osc;
            if (!st.pass_cap) ++out.reject_cap;
        }
    }
    return out;
}

// =============================================================================
// Doubling-scale selection
// =============================================================================

ScaleSelection select_scale(const DiscreteMeasure& mu, const Vec& y0, double eps1, double rho,
                            double s, int max_k, int per_octave) {
    if (!(eps1 >= mu.radius_floor()))
        throw PreconditionError("select_scale requires eps1 >= radius floor");
    if (max_k < 1) throw PreconditionError("select_scale requires max_k >= 1");

    const double top = eps1 * std::pow(4.0, max_k + 1);
    const std::vector<double> grid = dyadic_refined_grid(eps1, top, per_octave);
    const std::vector<double> masses = mu.ball_mass_profile(y0, grid);
    std::vector<double> thetas(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        thetas[i] = masses[i] / std::pow(grid[i], s);

    // delta_k = sup of theta over the grid within [eps1, 4^k eps1].
    auto window_sup = [&](int k) {
        const double hi = eps1 * std::pow(4.0, k) * (1.0 + 1e-12);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.size() && grid[i] <= hi; ++i)
            sup = std::max(sup, thetas[i]);
        return sup;
    };

    ScaleSelection sel;
    sel.eps1 = eps1;
    sel.omega0 = std::pow(4.0, max_k);
    sel.delta_k.push_back(window_sup(0));

    const double growth_tol = 1.0 + rho * rho / 4.0;
    int found = -1;
    for (int k = 1; k <= max_k; ++k) {
        sel.delta_k.push_back(window_sup(k));
        const double next = window_sup(k + 1);
        if (sel.delta_k.back() >= next / growth_tol) {
            found = k;
            if (static_cast<int>(sel.delta_k.size()) == k + 1) sel.delta_k.push_back(next);
            break;
        }
    }
    if (found < 0)
        throw GrowthAnomalyError(
            "select_scale: density kept growing through every window up to 4^" +
            std::to_string(max_k) + " eps1 (polynomial growth bound violated)");
    sel.k = found;

    // chosen eps: grid argmax of theta over [eps1, 4^k eps1]; first index wins
    // ties, so a flat profile selects eps1 itself.
    const double hi = eps1 * std::pow(4.0, found) * (1.0 + 1e-12);
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size() && grid[i] <= hi; ++i)
        if (thetas[i] > thetas[best]) best = i;
    sel.chosen_eps = grid[best];
    sel.theta_at_eps = thetas[best];

    // Verified postcondition on the grid points of [eps, 4 eps].
    const double lo4 = sel.chosen_eps * (1.0 - 1e-12);
    const double hi4 = 4.0 * sel.chosen_eps * (1.0 + 1e-12);
    const double cap = (1.0 + rho * rho) * sel.theta_at_eps;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < lo4 || grid[i] > hi4) continue;
        sel.check_grid.push_back(grid[i]);
        if (thetas[i] > cap)
            throw GrowthAnomalyError("select_scale: verified doubling bound failed at t=" +
                                     std::to_string(grid[i]));
    }
    return sel;
}

// =============================================================================
// Frame functional pieces
// =============================================================================

namespace {

double u_integrand(const Vec& z, const AffineFrame& frame, double eps,
                   const SmoothingProfile& profile) {
    const double z2 = z.norm2();
    if (z2 == 0.0) return 0.0;
    const double s = profile.s();
    const double u = z2 / (eps * eps);
    const double p2 = frame.projected_norm2(z);
    const double np1 = static_cast<double>(frame.dim());
    const double bracket = profile.phi(u) * (np1 - (s + 1.0) * p2 / z2) +
                           2.0 * profile.phi_prime(u) * p2 / (eps * eps);
    return bracket / std::pow(std::sqrt(z2), s + 1.0);
}

}  // namespace

UAnnuli u_annuli_decomposition(const DiscreteMeasure& mu, const Vec& y0, const AffineFrame& frame,
                               double eps, const SmoothingProfile& profile) {
    if (!(eps > 0.0)) throw PreconditionError("u_annuli_decomposition requires eps > 0");
    const double rho = profile.rho();
    const double e2 = eps * eps;
    const double b1 = e2;
    const double b2 = e2 * (1.0 + rho * rho);
    const double b3 = e2 * (1.0 + rho + rho * rho);
    const double b4 = e2 * (1.0 + rho + 2.0 * rho * rho);  // kernel support edge

    const double support = profile.kernel_support_radius(eps) * (1.0 + 1e-12);
    std::vector<BallHit> hits;
    mu.index().ball_query(y0, support, hits);

    // Shell boundaries are assigned half-open so every in-support atom lands
    // in exactly one shell and the four sums reproduce the full functional.
    std::vector<std::uint32_t> shell_atoms[4];
    for (const BallHit& h : hits) {
        const double z2 = h.dist2;
        if (z2 < b1)
            shell_atoms[0].push_back(h.index);
        else if (z2 <= b2)
            shell_atoms[1].push_back(h.index);
        else if (z2 <= b3)
            shell_atoms[2].push_back(h.index);
        else if (z2 < b4)
            shell_atoms[3].push_back(h.index);
        // z2 >= b4: phi and phi' both vanish, zero contribution.
    }

    auto shell_sum = [&](const std::vector<std::uint32_t>& atoms) {
        return pairwise_sum(atoms.size(), [&](std::size_t i) {
            return mu.weight(atoms[i]) * u_integrand(mu.atom(atoms[i]) - y0, frame, eps, profile);
        });
    };

    UAnnuli out;
    out.i1 = shell_sum(shell_atoms[0]);
    out.i2 = shell_sum(shell_atoms[1]);
    out.i3 = shell_sum(shell_atoms[2]);
    out.i4 = shell_sum(shell_atoms[3]);
    return out;
}

Lemma3Result lemma3_check(const DiscreteMeasure& mu, const SpreadSelection& sel, double eps,
                          const SmoothingProfile& profile) {
    if (!(eps >= 20.0 * sel.r))
        throw PreconditionError("lemma3_check requires eps >= 20 r");
    if (sel.points.size() < 2) throw PreconditionError("lemma3_check needs a full selection");

    const AffineFrame frame = orthonormalize(sel.points);
    const Vec& y0 = sel.points[0];
    const double u = u_functional(mu, y0, frame, eps, profile);

    Lemma3Result out;
    out.lhs = sel.hull_distances.back() * std::abs(u);

    const Vec r0v = smoothed_riesz(mu, y0, eps, profile).value;
    double sum = 0.0;
    for (std::size_t j = 1; j < sel.points.size(); ++j)
        sum += (smoothed_riesz(mu, sel.points[j], eps, profile).value - r0v).norm();
    out.sum_increments = sum;
    out.tail_term = density(mu, y0, 3.0 * eps, profile.s()) * sel.r * sel.r / (eps * eps);
    out.rhs = out.sum_increments + out.tail_term;
    if (out.rhs > 0.0) {
        out.empirical_c4 = out.lhs / out.rhs;
    } else {
        out.anomaly = out.lhs != 0.0;
        out.empirical_c4 = 0.0;
    }
    return out;
}

Lemma4Result lemma4_check(const DiscreteMeasure& mu, const Vec& y0, const AffineFrame& frame,
                          const ScaleSelection& scale, const SmoothingProfile& profile,
                          double tolerance) {
    Lemma4Result out;
    out.eps = scale.chosen_eps;
    out.theta = scale.theta_at_eps;
    out.u = u_functional(mu, y0, frame, scale.chosen_eps, profile);
    const double np1 = static_cast<double>(frame.dim());
    const double gap = np1 - profile.s();  // n + 1 - s, zero at integer exponents
    out.bound = 0.7 * gap * out.theta / scale.chosen_eps;
    if (out.bound > 0.0) {
        out.ratio = std::abs(out.u) / out.bound;
        out.pass = std::abs(out.u) >= out.bound * (1.0 - tolerance);
    } else {
        out.ratio = 0.0;
        out.pass = true;  // vacuous bound
    }
    return out;
}

Lemma5Result lemma5_check(const DiscreteMeasure& mu, std::span<const std::uint32_t> retained,
                          const Vec& x0, double r, double eps, const FDeltaParams& params,
                          const SmoothingProfile& profile, int max_points) {
    if (!(eps < params.eps0))
        throw PreconditionError("lemma5_check requires eps < eps0");
    if (!(r / params.delta < params.eps0))
        throw PreconditionError("lemma5_check requires r/delta < eps0");

    std::vector<std::uint32_t> in_ball;
    for (std::uint32_t id : retained)
        if (mu.atom(id).dist2(x0) < r * r) in_ball.push_back(id);
    if (in_ball.size() < 2)
        throw PipelineError("lemma5_check", "fewer than 2 retained points in the ball");

    // Deterministic stride sample.
    std::vector<std::uint32_t> pts;
    const std::size_t stride = std::max<std::size_t>(1, in_ball.size() / static_cast<std::size_t>(max_points));
    for (std::size_t i = 0; i < in_ball.size() && pts.size() < static_cast<std::size_t>(max_points);
         i += stride)
        pts.push_back(in_ball[i]);

    std::vector<Vec> vals(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        vals[i] = smoothed_riesz(mu, mu.atom(pts[i]), eps, profile).value;
    });

    Lemma5Result out;
    out.delta = params.delta;
    out.points_used = static_cast<int>(pts.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            out.max_pair_osc = std::max(out.max_pair_osc, (vals[i] - vals[j]).norm());
    out.ratio = out.max_pair_osc / params.delta;
    return out;
}

ResidualOrderStudy residual_order_study(const DiscreteMeasure& mu, const SmoothingProfile& profile,
                                        std::span<const std::uint32_t> base_atoms,
                                        std::span<const double> eps_values,
                                        std::span<const double> rel_offsets, const Vec& direction) {
    if (base_atoms.empty() || eps_values.empty() || rel_offsets.size() < 2)
        throw PreconditionError("residual_order_study needs bases, scales and >= 2 offsets");
    for (double f : rel_offsets)
        if (!(f > 0.0 && f < 0.25))
            throw PreconditionError("residual_order_study offsets must lie in (0, 1/4)");
    for (double e : eps_values)
        if (!(e > 0.0)) throw PreconditionError("residual_order_study scales must be positive");
    const Vec dir = direction * (1.0 / direction.norm());

    ResidualOrderStudy out;
    out.rel_offsets.assign(rel_offsets.begin(), rel_offsets.end());
    out.rms_residual.assign(rel_offsets.size(), 0.0);
    out.c1_min = std::numeric_limits<double>::infinity();

    struct Cell {
        double sum_sq = 0.0;
        std::size_t count = 0;
    };
    std::vector<Cell> cells(rel_offsets.size());

    std::vector<std::vector<TaylorSplit>> splits(base_atoms.size());
    parallel_for(base_atoms.size(), [&](std::size_t b) {
        auto& row = splits[b];
        const Vec base = mu.atom(base_atoms[b]);
        for (double eps : eps_values)
            for (std::size_t i = 0; i < rel_offsets.size(); ++i)
                for (double sign : {1.0, -1.0}) {
                    const Vec x = base + dir * (sign * rel_offsets[i] * eps);
                    row.push_back(taylor_split(mu, base, x, eps, profile));
                }
    });

    std::size_t flat = 0;
    for (std::size_t b = 0; b < base_atoms.size(); ++b) {
        flat = 0;
        for (std::size_t e = 0; e < eps_values.size(); ++e)
            for (std::size_t i = 0; i < rel_offsets.size(); ++i)
                for (int sgn = 0; sgn < 2; ++sgn, ++flat) {
                    const TaylorSplit& ts = splits[b][flat];
                    cells[i].sum_sq += ts.residual.norm2();
                    ++cells[i].count;
                    if (!ts.vacuous && ts.bound_ratio > 0.0) {
                        out.c1_min = std::min(out.c1_min, ts.bound_ratio);
                        out.c1_max = std::max(out.c1_max, ts.bound_ratio);
                    }
                }
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
        out.rms_residual[i] = std::sqrt(cells[i].sum_sq / static_cast<double>(cells[i].count));

    // Least-squares slope of log rms against log offset.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!(out.rms_residual[i] > 0.0)) continue;
        const double lx = std::log(rel_offsets[i]);
        const double ly = std::log(out.rms_residual[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    if (used >= 2) {
        const double d = static_cast<double>(used) * sxx - sx * sx;
        out.slope = (static_cast<double>(used) * sxy - sx * sy) / d;
    }
    if (!std::isfinite(out.c1_min)) out.c1_min = 0.0;
    return out;
}

// =============================================================================
// Contradiction pipeline
// =============================================================================

namespace {

struct PipelineSetup {
    DiscreteMeasure normalized;
    double normalization;
    FDeltaParams params;
    double r0;
    double eps0;
};

PipelineSetup pipeline_setup(const DiscreteMeasure& mu, const SmoothingProfile& profile,
                             const ContradictionOptions& opts) {
    // Normalize so the median small-radius density is ~1; the chain below
    // compares retained mass against r^s/2 in these units.
    const std::vector<double> theta_grid = limsup_radii_grid(mu, 2, opts.per_octave);
    std::vector<double> thetas;
    const std::uint32_t sample_stride = std::max<std::uint32_t>(1, mu.size() / 256);
    for (std::uint32_t i = 0; i < mu.size(); i += sample_stride) {
        const auto est = upper_density_estimate(mu, mu.atom(i), profile.s(), theta_grid);
        thetas.push_back(est.value);
    }
    std::sort(thetas.begin(), thetas.end());
    const double median = thetas[thetas.size() / 2];
    if (!(median > 0.0)) throw PipelineError("normalize", "median small-radius density is zero");

    PipelineSetup setup{mu.scaled(1.0 / median), median, FDeltaParams{}, 0.0, 0.0};
    const double diam = std::max(mu.diameter_hint(), mu.radius_floor());
    setup.r0 = opts.r0 > 0.0 ? opts.r0 : diam / 16.0;
    setup.eps0 = opts.eps0 > 0.0 ? opts.eps0 : diam / 32.0;
    setup.params.r0 = std::max(setup.r0, mu.radius_floor());
    setup.params.eps0 = setup.eps0;
    setup.params.c0 = opts.c0;
    setup.params.per_octave = opts.per_octave;
    setup.params.default_osc_grid(setup.normalized, opts.osc_generations);
    return setup;
}

struct DensityPoint {
    std::uint32_t x0_index;
    double r;
    double mass_ratio;
};

/// Search retained atoms x0 and dyadic r for mu(B(x0,r) ∩ F_delta) >= r^s / 2.
std::optional<DensityPoint> density_point_search(const DiscreteMeasure& mu,
                                                 const std::vector<std::uint32_t>& retained,
                                                 double s, int need_points,
                                                 const ContradictionOptions& opts) {
    if (retained.empty()) return std::nullopt;
    const double r_lo = 2.0 * mu.radius_floor();
    const double r_hi = std::max(mu.diameter_hint() / 8.0, r_lo);
    std::vector<double> r_grid;
    for (double r = r_hi; r >= r_lo * (1.0 - 1e-12); r *= 0.5) r_grid.push_back(r);
    if (r_grid.empty()) return std::nullopt;

    const std::size_t stride =
        std::max<std::size_t>(1, retained.size() / static_cast<std::size_t>(opts.candidate_cap));

    std::optional<DensityPoint> best;
    for (std::size_t c = 0; c < retained.size(); c += stride) {
        const std::uint32_t x0 = retained[c];
        const Vec x = mu.atom(x0);
        for (double r : r_grid) {
            std::vector<BallHit> hits;
            mu.index().ball_query(x, r, hits);
            double mass = 0.0;
            int count = 0;
            std::size_t ri = 0;
            for (const BallHit& h : hits) {
                while (ri < retained.size() && retained[ri] < h.index) ++ri;
                if (ri < retained.size() && retained[ri] == h.index) {
                    mass += mu.weight(h.index);
                    ++count;
                }
            }
            if (count < need_points) continue;
            const double ratio = mass / std::pow(r, s);
            if (ratio < 0.5) continue;
            if (!best || ratio > best->mass_ratio) best = DensityPoint{x0, r, ratio};
        }
    }
    return best;
}

ContradictionReport run_pipeline(const DiscreteMeasure& raw, const SmoothingProfile& profile,
                                 double tau, std::optional<Vec> forced_x0, double forced_r,
                                 const ContradictionOptions& opts) {
    if (!(tau > 0.0 && tau < 0.5)) throw PreconditionError("tau must lie in (0, 1/2)");
    const double s = profile.s();
    const double np1 = std::ceil(s);  // n + 1
    const int n = static_cast<int>(np1) - 1;
    const int need = n + 2;

    ContradictionReport rep;
    rep.tau = tau;
    rep.rho = profile.rho();
    rep.s = s;
    rep.omega0 = std::pow(4.0, opts.max_k);
    rep.delta_report = std::pow(tau, s + 2.0) / rep.omega0;

    PipelineSetup setup = pipeline_setup(raw, profile, opts);
    rep.normalization = setup.normalization;
    const DiscreteMeasure& mu = setup.normalized;

    // Controlled-point filter with an oscillation-threshold ladder: the
    // reported delta reflects the contradiction scaling, while the filter
    // itself needs a threshold the discrete cloud can actually meet.
    FDeltaMembership membership(mu, setup.params, profile);
    membership.prefetch_all();

    std::vector<double> ladder{rep.delta_report};
    for (double d : {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.5}) {
        if (d > rep.delta_report && d <= opts.filter_ceiling) ladder.push_back(d);
    }

    std::vector<std::uint32_t> retained;
    std::optional<DensityPoint> point;
    bool any_retained = false;
    for (double delta_f : ladder) {
        retained.clear();
        for (std::uint32_t i = 0; i < mu.size(); ++i)
            if (membership.retained(i, delta_f)) retained.push_back(i);
        if (retained.empty()) continue;
        any_retained = true;

        if (forced_x0) {
            // Pinned density point: measure its retained mass and proceed.
            std::vector<BallHit> hits;
            mu.index().ball_query(*forced_x0, forced_r, hits);
            double mass = 0.0;
            int count = 0;
            std::size_t ri = 0;
            for (const BallHit& h : hits) {
                while (ri < retained.size() && retained[ri] < h.index) ++ri;
                if (ri < retained.size() && retained[ri] == h.index) {
                    mass += mu.weight(h.index);
                    ++count;
                }
            }
            if (count < need) continue;
            std::uint32_t nearest = retained[0];
            double best_d = std::numeric_limits<double>::infinity();
            for (std::uint32_t id : retained) {
                const double d = mu.atom(id).dist2(*forced_x0);
                if (d < best_d) {
                    best_d = d;
                    nearest = id;
                }
            }
            point = DensityPoint{nearest, forced_r, mass / std::pow(forced_r, s)};
        } else {
            point = density_point_search(mu, retained, s, need, opts);
        }
        if (point) {
            rep.delta_filter_used = delta_f;
            rep.filter_relaxed = delta_f != rep.delta_report;
            break;
        }
    }
    if (!point) {
        if (!any_retained)
            throw PipelineError("f_delta_filter", "no atom passed the filter at any threshold");
        throw PipelineError("density_point_search",
                            "no ball with retained mass >= r^s/2 and " + std::to_string(need) +
                                " retained points");
    }

    rep.x0_index = point->x0_index;
    rep.r = point->r;
    rep.mass_ratio = point->mass_ratio;
    rep.r_constraint_ok = point->r < setup.eps0 * rep.delta_report;

    const Vec x0 = forced_x0 ? *forced_x0 : mu.atom(point->x0_index);

    SpreadSelection sel;
    try {
        sel = select_spread_points(mu, retained, x0, point->r, need);
    } catch (const std::exception& e) {
        throw PipelineError("select_spread_points", e.what());
    }

    rep.eps1 = point->r / tau;
    ScaleSelection scale;
    try {
        scale = select_scale(mu, sel.points[0], rep.eps1, profile.rho(), s, opts.max_k,
                             opts.per_octave);
    } catch (const GrowthAnomalyError& e) {
        throw PipelineError("select_scale", e.what());
    }
    rep.eps = scale.chosen_eps;
    rep.k = scale.k;
    rep.theta_eps = scale.theta_at_eps;

    const AffineFrame frame = orthonormalize(sel.points);
    rep.u_value = u_functional(mu, sel.points[0], frame, rep.eps, profile);
    rep.hull_dist = sel.hull_distances.back();
    rep.theta_3eps = density(mu, sel.points[0], 3.0 * rep.eps, s);

    rep.mid_term = rep.eps * std::abs(rep.u_value) * rep.hull_dist;
    rep.lhs = rep.theta_eps * rep.r;
    rep.rhs = rep.eps * rep.delta_report + rep.theta_3eps * rep.r * rep.r / rep.eps;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : std::numeric_limits<double>::infinity();
    return rep;
}

}  // namespace

ContradictionReport contradiction_ratio(const DiscreteMeasure& mu, const SmoothingProfile& profile,
                                        double tau, const ContradictionOptions& opts) {
    return run_pipeline(mu, profile, tau, std::nullopt, 0.0, opts);
}

ContradictionReport contradiction_ratio(const DiscreteMeasure& mu, const SmoothingProfile& profile,
                                        double tau, const Vec& x0, double r,
                                        const ContradictionOptions& opts) {
    if (!(r > 0.0)) throw PreconditionError("contradiction_ratio requires r > 0");
    return run_pipeline(mu, profile, tau, x0, r, opts);
}

// =============================================================================
// Principal-value classification
// =============================================================================

const char* to_string(PvVerdict v) {
    switch (v) {
        case PvVerdict::Converging: return "converging";
        case PvVerdict::Oscillating: return "oscillating";
        case PvVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

PvClassification pv_classify(const PvScan& scan, double tol_conv, double tol_osc) {
    PvClassification out;
    const std::size_t L = scan.values.size();
    if (L < 4) return out;

    std::vector<double> steps(L - 1);
    for (std::size_t i = 0; i + 1 < L; ++i)
        steps[i] = (scan.values[i + 1].value - scan.values[i].value).norm();
    for (double d : steps) out.global_max_step = std::max(out.global_max_step, d);
    for (std::size_t i = L - 4; i + 1 < L; ++i)
        out.tail_max_step = std::max(out.tail_max_step, steps[i]);

    auto window_osc = [&](std::size_t from) {
        double osc = 0.0;
        for (std::size_t i = from; i < L; ++i)
            for (std::size_t j = i + 1; j < L; ++j)
                osc = std::max(osc, (scan.values[i].value - scan.values[j].value).norm());
        return osc;
    };
    out.tail_osc = window_osc(L - 4);
    out.last_window_osc = window_osc(L - 2);

    if (out.tail_osc < tol_conv && out.last_window_osc <= 0.5 * out.tail_osc) {
        out.verdict = PvVerdict::Converging;
        return out;
    }
    const double d1 = steps[L - 4], d2 = steps[L - 3], d3 = steps[L - 2];
    const bool monotone_decay = d2 < d1 && d3 < d2;
    if (out.tail_osc >= tol_osc && !monotone_decay) {
        out.verdict = PvVerdict::Oscillating;
        return out;
    }
    out.verdict = PvVerdict::Inconclusive;
    return out;
}

}  // namespace rieszlab
