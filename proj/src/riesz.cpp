#include "rieszlab/riesz.hpp"

#include <algorithm>
#include <cmath>

#include "rieszlab/errors.hpp"
#include "rieszlab/summation.hpp"

namespace rieszlab {

namespace {

bool same_position(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.dim(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

}  // namespace

RieszValue truncated_riesz(const DiscreteMeasure& mu, const Vec& x, double eps, double s) {
    if (!(eps > 0.0)) throw PreconditionError("truncated_riesz requires eps > 0");
    const double eps2 = eps * eps;
    const int m = mu.dim();
    std::uint32_t contributing = 0;
    for (std::uint32_t i = 0; i < mu.size(); ++i)
        if (x.dist2(mu.atom(i)) > eps2) ++contributing;

    Vec total = pairwise_sum<Vec>(
        mu.size(),
        [&](std::size_t i) {
            const Vec y = mu.atom(static_cast<std::uint32_t>(i));
            const double d2 = x.dist2(y);
            if (!(d2 > eps2)) return Vec::zero(m);
            const Vec d = x - y;
            const double r = std::sqrt(d2);
            return d * (mu.weight(static_cast<std::uint32_t>(i)) / std::pow(r, s + 1.0));
        },
        Vec::zero(m));

    RieszValue out;
    out.value = total;
    out.atom_count = contributing;
    out.below_floor = eps < mu.radius_floor();
    return out;
}

RieszValue smoothed_riesz_excluding(const DiscreteMeasure& mu, const Vec& x, double eps,
                                    const SmoothingProfile& profile, std::optional<Vec> exclude) {
    if (!(eps > 0.0)) throw PreconditionError("smoothed_riesz requires eps > 0");
    const int m = mu.dim();
    const double support = profile.kernel_support_radius(eps) * (1.0 + 1e-12);
    std::vector<BallHit> hits;
    mu.index().ball_query(x, support, hits);

    if (exclude) {
        std::erase_if(hits, [&](const BallHit& h) { return same_position(mu.atom(h.index), *exclude); });
    }

    Vec total = pairwise_sum<Vec>(
        hits.size(),
        [&](std::size_t i) {
            const std::uint32_t idx = hits[i].index;
            return profile.kernel(x - mu.atom(idx), eps) * mu.weight(idx);
        },
        Vec::zero(m));

    RieszValue out;
    out.value = total;
    out.atom_count = static_cast<std::uint32_t>(hits.size());
    out.below_floor = eps < mu.radius_floor();
    return out;
}

RieszValue smoothed_riesz(const DiscreteMeasure& mu, const Vec& x, double eps,
                          const SmoothingProfile& profile) {
    return smoothed_riesz_excluding(mu, x, eps, profile, std::nullopt);
}

Vec taylor_main_term(const DiscreteMeasure& mu, const Vec& base, const Vec& offset, double eps,
                     const SmoothingProfile& profile) {
    if (!(eps > 0.0)) throw PreconditionError("taylor_main_term requires eps > 0");
    if (!(offset.norm() < eps / 4.0))
        throw PreconditionError("taylor_main_term requires |offset| < eps/4");

    const int m = mu.dim();
    const double s = profile.s();
    const double eps2 = eps * eps;
    // phi and phi' both vanish past the support; query just that far.
    const double support = profile.kernel_support_radius(eps) * (1.0 + 1e-12);
    std::vector<BallHit> hits;
    mu.index().ball_query(base, support, hits);

    return pairwise_sum<Vec>(
        hits.size(),
        [&](std::size_t i) {
            const std::uint32_t idx = hits[i].index;
            const Vec y = mu.atom(idx) - base;
            const double y2 = y.norm2();
            if (y2 == 0.0) return Vec::zero(m);  // expansion origin carries no mass here
            const double u = y2 / eps2;
            const double xy = offset.dot(y);
            const double inv_pow = 1.0 / std::pow(std::sqrt(y2), s + 1.0);
            Vec term = (offset - y * ((s + 1.0) * xy / y2)) * profile.phi(u);
            term += y * (profile.phi_prime(u) * 2.0 * xy / eps2);
            return term * (mu.weight(idx) * inv_pow);
        },
        Vec::zero(m));
}

TaylorSplit taylor_split(const DiscreteMeasure& mu, const Vec& base, const Vec& x, double eps,
                         const SmoothingProfile& profile) {
    const Vec offset = x - base;
    if (!(offset.norm() < eps / 4.0))
        throw PreconditionError("taylor_split requires |x - base| < eps/4");

    TaylorSplit out;
    const RieszValue at_x = smoothed_riesz_excluding(mu, x, eps, profile, base);
    const RieszValue at_base = smoothed_riesz_excluding(mu, base, eps, profile, base);
    out.delta = at_x.value - at_base.value;
    out.main_term = taylor_main_term(mu, base, offset, eps, profile);
    out.residual = out.delta - out.main_term;

    const double off2 = offset.norm2();
    if (off2 == 0.0) {
        out.bound_ratio = 0.0;
        out.vacuous = false;
        return out;
    }
    const double theta3 = density(mu, base, 3.0 * eps, profile.s());
    if (theta3 == 0.0) {
        out.vacuous = true;
        out.bound_ratio = 0.0;
    } else {
        out.bound_ratio = out.residual.norm() * eps * eps / (theta3 * off2);
    }
    return out;
}

double u_functional(const DiscreteMeasure& mu, const Vec& y0, const AffineFrame& frame, double eps,
                    const SmoothingProfile& profile) {
    if (!(eps > 0.0)) throw PreconditionError("u_functional requires eps > 0");
    const double s = profile.s();
    const double eps2 = eps * eps;
    const double np1 = static_cast<double>(frame.dim());  // n + 1
    const double support = profile.kernel_support_radius(eps) * (1.0 + 1e-12);
    std::vector<BallHit> hits;
    mu.index().ball_query(y0, support, hits);

    return pairwise_sum(hits.size(), [&](std::size_t i) {
        const std::uint32_t idx = hits[i].index;
        const Vec z = mu.atom(idx) - y0;
        const double z2 = z.norm2();
        if (z2 == 0.0) return 0.0;
        const double u = z2 / eps2;
        const double p2 = frame.projected_norm2(z);
        const double bracket = profile.phi(u) * (np1 - (s + 1.0) * p2 / z2) +
                               2.0 * profile.phi_prime(u) * p2 / eps2;
        return mu.weight(idx) * bracket / std::pow(std::sqrt(z2), s + 1.0);
    });
}

std::vector<double> dyadic_eps_grid(double eps_max, int generations) {
    if (!(eps_max > 0.0) || generations < 1)
        throw PreconditionError("dyadic_eps_grid needs eps_max > 0 and generations >= 1");
    std::vector<double> grid(static_cast<std::size_t>(generations));
    double e = eps_max;
    for (int g = 0; g < generations; ++g, e *= 0.5) grid[static_cast<std::size_t>(g)] = e;
    return grid;
}

PvScan pv_scan(const DiscreteMeasure& mu, const Vec& x, std::span<const double> eps_grid,
               const SmoothingProfile& profile) {
    PvScan scan;
    const double floor = mu.radius_floor();
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
            throw PreconditionError("pv_scan grid must be strictly decreasing");
        if (eps_grid[i] >= floor)
            scan.eps.push_back(eps_grid[i]);
        else
            scan.truncated_grid = true;
    }
    if (scan.eps.empty()) throw PreconditionError("pv_scan grid entirely below the radius floor");

    scan.values.resize(scan.eps.size());
    parallel_for(scan.eps.size(), [&](std::size_t i) {
        scan.values[i] = smoothed_riesz(mu, x, scan.eps[i], profile);
    });

    scan.osc_tail.resize(scan.eps.size());
    for (std::size_t k = 0; k < scan.eps.size(); ++k) {
        double osc = 0.0;
        for (std::size_t i = k; i < scan.eps.size(); ++i)
            for (std::size_t j = i + 1; j < scan.eps.size(); ++j)
                osc = std::max(osc, (scan.values[i].value - scan.values[j].value).norm());
        scan.osc_tail[k] = osc;
    }
    return scan;
}

}  // namespace rieszlab
