#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rieszlab/geometry.hpp"
#include "rieszlab/measure.hpp"
#include "rieszlab/riesz.hpp"
#include "rieszlab/smoothing.hpp"

namespace rieszlab {

// =============================================================================
// Controlled-point filter
// =============================================================================

/// Parameters of the controlled-point filter. An atom is retained when
///   (a) its density stays within twice its small-radius estimate on every
///       grid radius up to r0,
///   (b) the smoothed transform oscillates by at most delta across the
///       osc_eps_grid, and
///   (c) the small-radius density estimate is at most c0.
struct FDeltaParams {
    double delta = 0.05;
    double r0 = 0.05;
    double eps0 = 0.02;
    double c0 = 10.0;
    std::vector<double> osc_eps_grid;  // dyadic, within (0, eps0]
    int per_octave = 16;
    int theta_octaves = 2;  // small-radius window width for the density estimate

    /// Fills osc_eps_grid with `generations` dyadic entries below eps0,
    /// clipped at the measure's radius floor.
    void default_osc_grid(const DiscreteMeasure& mu, int generations = 4);
};

/// Per-atom filter measurements (delta-independent except pass_osc).
struct FDeltaStats {
    double theta_star = 0.0;   // small-radius density estimate
    double max_density = 0.0;  // over the full [floor, r0] grid
    double osc = 0.0;          // smoothed-transform oscillation over the grid
    bool pass_growth = false;  // max_density <= 2 theta_star
    bool pass_cap = false;     // theta_star <= c0
};

/// Lazy per-atom evaluator; stats are computed once per atom and reused for
/// every delta threshold. Call prefetch_all() before any concurrent reads;
/// lazy fills are only safe from one thread at a time.
class FDeltaMembership {
public:
    FDeltaMembership(const DiscreteMeasure& mu, const FDeltaParams& params,
                     const SmoothingProfile& profile);

    const FDeltaStats& stats(std::uint32_t atom) const;
    bool retained(std::uint32_t atom, double delta) const;

    /// Precompute stats for every atom across the worker pool.
    void prefetch_all() const;

    const DiscreteMeasure& measure() const { return mu_; }
    const FDeltaParams& params() const { return params_; }

private:
    const DiscreteMeasure& mu_;
    FDeltaParams params_;
    const SmoothingProfile& profile_;
    std::vector<double> density_grid_;
    std::vector<double> theta_grid_;
    mutable std::vector<FDeltaStats> cache_;
    mutable std::vector<char> ready_;
};

struct FDeltaResult {
    std::vector<std::uint32_t> retained;
    std::vector<FDeltaStats> stats;  // per atom, aligned with the measure
    std::size_t reject_growth = 0;
    std::size_t reject_osc = 0;
    std::size_t reject_cap = 0;
    double delta = 0.0;
};

/// Full-measure filter pass. An empty retained set is reported, not thrown;
/// the rejection histogram names the dominating condition.
FDeltaResult f_delta_filter(const DiscreteMeasure& mu, const FDeltaParams& params,
                            const SmoothingProfile& profile);

// =============================================================================
// Doubling-scale selection
// =============================================================================

/// Outcome of the plateau search: a scale eps in [eps1, 4^k eps1] whose
/// density nearly dominates the grid sup up to 4^{k+1} eps1, so the octave
/// above eps carries no more than (1+rho^2) of its density.
struct ScaleSelection {
    double eps1 = 0.0;
    double omega0 = 0.0;  // 4^max_k, the reported search ceiling
    double chosen_eps = 0.0;
    int k = 0;
    std::vector<double> delta_k;  // running octave-pair sups, delta_k[j] over [eps1, 4^j eps1]
    double theta_at_eps = 0.0;
    std::vector<double> check_grid;  // grid points of [eps, 4 eps] used for the verified bound
};

/// Throws GrowthAnomalyError when no k <= max_k satisfies
/// delta_k >= delta_{k+1}/(1 + rho^2/4): the measure's density keeps growing
/// through every window, violating the polynomial growth premise.
ScaleSelection select_scale(const DiscreteMeasure& mu, const Vec& y0, double eps1, double rho,
                            double s, int max_k, int per_octave = 16);

// =============================================================================
// Frame-functional decompositions and checks
// =============================================================================

/// Partial sums of the frame functional over the shells
///   A1 = {|z| < eps},
///   A2 = {eps <= |z| <= eps sqrt(1+rho^2)},
///   A3 = (eps sqrt(1+rho^2), eps sqrt(1+rho+rho^2)],
///   A4 = (eps sqrt(1+rho+rho^2), eps sqrt(1+rho+2rho^2)).
/// i1+i2+i3+i4 reproduces u_functional up to reduction rounding.
struct UAnnuli {
    double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0;
    double total() const { return i1 + i2 + i3 + i4; }
};

UAnnuli u_annuli_decomposition(const DiscreteMeasure& mu, const Vec& y0, const AffineFrame& frame,
                               double eps, const SmoothingProfile& profile);

/// Hull-distance bound on the frame functional against transform increments:
/// lhs = d(y_{n+1}, L_n) |U(y0)|, rhs = sum_j |R(y_j) - R(y_0)| + theta(y0,3eps) r^2/eps^2.
struct Lemma3Result {
    double lhs = 0.0;
    double rhs = 0.0;
    double sum_increments = 0.0;
    double tail_term = 0.0;
    double empirical_c4 = 0.0;
    bool anomaly = false;  // rhs == 0 with lhs != 0
};

Lemma3Result lemma3_check(const DiscreteMeasure& mu, const SpreadSelection& sel, double eps,
                          const SmoothingProfile& profile);

/// Lower bound on |U| at the selected scale. Vacuous (bound exactly 0) at
/// integer exponents, where n+1-s vanishes.
struct Lemma4Result {
    double u = 0.0;
    double theta = 0.0;
    double eps = 0.0;
    double bound = 0.0;  // 0.7 (n+1-s) theta / eps
    double ratio = 0.0;  // |u| / bound (inf-safe: 0 when bound == 0 and u == 0)
    bool pass = false;
};

Lemma4Result lemma4_check(const DiscreteMeasure& mu, const Vec& y0, const AffineFrame& frame,
                          const ScaleSelection& scale, const SmoothingProfile& profile,
                          double tolerance = 0.1);

/// Oscillation of the smoothed transform across retained points of one ball.
struct Lemma5Result {
    double max_pair_osc = 0.0;
    double delta = 0.0;
    double ratio = 0.0;  // max_pair_osc / delta
    int points_used = 0;
};

Lemma5Result lemma5_check(const DiscreteMeasure& mu, std::span<const std::uint32_t> retained,
                          const Vec& x0, double r, double eps, const FDeltaParams& params,
                          const SmoothingProfile& profile, int max_points = 32);

/// Order study of the expansion residual: pooled RMS of |E| at fixed relative
/// offsets, across base atoms, both offset signs, and a sweep of scales. The
/// pooling averages out the population staircase a gappy measure induces on
/// any single configuration.
struct ResidualOrderStudy {
    std::vector<double> rel_offsets;   // |x - base| / eps
    std::vector<double> rms_residual;  // pooled over bases, signs, scales
    double slope = 0.0;                // log-log fit of rms against offset
    double c1_min = 0.0;               // smallest nonzero normalized ratio seen
    double c1_max = 0.0;               // largest normalized ratio seen
};

ResidualOrderStudy residual_order_study(const DiscreteMeasure& mu, const SmoothingProfile& profile,
                                        std::span<const std::uint32_t> base_atoms,
                                        std::span<const double> eps_values,
                                        std::span<const double> rel_offsets, const Vec& direction);

// =============================================================================
// Contradiction pipeline
// =============================================================================

struct ContradictionOptions {
    int max_k = 8;
    double r0 = 0.0;    // growth window ceiling; 0 derives diameter/16
    double eps0 = 0.0;  // oscillation scale ceiling; 0 derives diameter/32
    double c0 = 10.0;
    int per_octave = 16;
    int osc_generations = 4;
    int candidate_cap = 48;       // x0 candidates examined in the search
    double filter_ceiling = 0.5;  // largest oscillation threshold the ladder may reach
};

/// Ledger of one contradiction experiment: lhs = theta(eps) r versus
/// rhs = eps delta + theta(3 eps) r^2 / eps, with every scale and constant
/// that entered the chain.
struct ContradictionReport {
    double tau = 0.0;
    double rho = 0.0;
    double s = 0.0;
    double normalization = 1.0;   // weight scale applied before filtering
    double delta_report = 0.0;    // tau^(s+2) / omega0
    double delta_filter_used = 0.0;
    bool filter_relaxed = false;  // oscillation threshold had to climb the ladder
    std::uint32_t x0_index = 0;
    double r = 0.0;
    bool r_constraint_ok = false;  // r < eps0 * delta_report
    double mass_ratio = 0.0;       // retained mass of B(x0,r) over r^s
    double eps1 = 0.0;
    double eps = 0.0;
    int k = 0;
    double omega0 = 0.0;
    double theta_eps = 0.0;
    double theta_3eps = 0.0;
    double u_value = 0.0;
    double hull_dist = 0.0;
    double mid_term = 0.0;  // eps |U| d(y_{n+1}, L_n)
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Full pipeline: normalize, filter, density-point search, spread selection,
/// scale selection, functional evaluation. Stage failures throw PipelineError
/// carrying the stage name.
ContradictionReport contradiction_ratio(const DiscreteMeasure& mu, const SmoothingProfile& profile,
                                        double tau, const ContradictionOptions& opts = {});

/// Variant with the density point pinned by the caller.
ContradictionReport contradiction_ratio(const DiscreteMeasure& mu, const SmoothingProfile& profile,
                                        double tau, const Vec& x0, double r,
                                        const ContradictionOptions& opts = {});

// =============================================================================
// Principal-value classification
// =============================================================================

enum class PvVerdict { Converging, Oscillating, Inconclusive };

struct PvClassification {
    PvVerdict verdict = PvVerdict::Inconclusive;
    double tail_osc = 0.0;         // oscillation over the last 4 generations
    double last_window_osc = 0.0;  // oscillation over the last 2 generations
    double global_max_step = 0.0;  // largest consecutive step anywhere
    double tail_max_step = 0.0;    // largest consecutive step in the last 4 generations
};

const char* to_string(PvVerdict v);

/// Converging: the 4-generation tail oscillation is below tol_conv and at
/// least halves into the final 2-generation window. Oscillating: the tail
/// oscillation stays at or above tol_osc without monotone step decay.
/// Shorter than 4 generations: inconclusive.
PvClassification pv_classify(const PvScan& scan, double tol_conv, double tol_osc);

}  // namespace rieszlab
