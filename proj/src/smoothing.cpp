#include "rieszlab/smoothing.hpp"

#include <cmath>

#include "rieszlab/errors.hpp"

namespace rieszlab {

// =============================================================================
// QuinticPiece
// =============================================================================

QuinticPiece QuinticPiece::hermite(double a, double b, double p0, double m0, double k0, double p1,
                                   double m1, double k1) {
    const double h = b - a;
    QuinticPiece q;
    q.a = a;
    q.b = b;
    q.c[0] = p0;
    q.c[1] = m0 * h;
    q.c[2] = 0.5 * k0 * h * h;
    const double A = p1 - (q.c[0] + q.c[1] + q.c[2]);
    const double B = m1 * h - (q.c[1] + 2.0 * q.c[2]);
    const double C = k1 * h * h - 2.0 * q.c[2];
    q.c[3] = 10.0 * A - 4.0 * B + 0.5 * C;
    q.c[4] = -15.0 * A + 7.0 * B - C;
    q.c[5] = 6.0 * A - 3.0 * B + 0.5 * C;
    return q;
}

double QuinticPiece::eval(double r) const {
    const double t = (r - a) / (b - a);
    double acc = c[5];
    for (int i = 4; i >= 0; --i) acc = acc * t + c[i];
    return acc;
}

double QuinticPiece::deriv(double r) const {
    const double h = b - a;
    const double t = (r - a) / h;
    double acc = 5.0 * c[5];
    acc = acc * t + 4.0 * c[4];
    acc = acc * t + 3.0 * c[3];
    acc = acc * t + 2.0 * c[2];
    acc = acc * t + c[1];
    return acc / h;
}

double QuinticPiece::second(double r) const {
    const double h = b - a;
    const double t = (r - a) / h;
    double acc = 20.0 * c[5];
    acc = acc * t + 12.0 * c[4];
    acc = acc * t + 6.0 * c[3];
    acc = acc * t + 2.0 * c[2];
    return acc / (h * h);
}

// =============================================================================
// SmoothingProfile
// =============================================================================

SmoothingProfile SmoothingProfile::build(double s, double rho, double validation_slack) {
    if (!(rho > 0.0 && rho < 0.5)) throw PreconditionError("rho must lie in (0, 1/2)");
    if (!(s > 0.0)) throw PreconditionError("s must be positive");

    SmoothingProfile p;
    p.s_ = s;
    p.rho_ = rho;
    p.slack_ = validation_slack;

    const double e = 0.5 * (s + 1.0);  // power-piece exponent
    // Endpoint data at r = 1 from the power piece.
    const double pow_v = 1.0, pow_d = e, pow_k = e * (e - 1.0);
    // Endpoint data of the linear descent.
    const double lin_d = -1.0 / rho;

    p.conn_a_ = QuinticPiece::hermite(1.0, p.j_plateau_end(), pow_v, pow_d, pow_k, 1.0, lin_d, 0.0);
    p.conn_b_ = QuinticPiece::hermite(p.j_linear_end(), p.support_end(), 0.0, lin_d, 0.0, 0.0, 0.0, 0.0);

    // Validation: sup |phi| over the full support, derivative sups over the
    // transition region r >= 1 where the construction can actually violate
    // the budget. 10^4 grid points plus the exact junction endpoints.
    const int grid_n = 10000;
    const double budget = (1.0 / rho) * (1.0 + validation_slack);
    Bounds b;
    b.grid_points = grid_n;
    double worst_prime = 0.0;
    double worst_prime_r = 1.0;
    for (int i = 0; i <= grid_n; ++i) {
        const double r = p.support_end() * static_cast<double>(i) / static_cast<double>(grid_n);
        b.sup_phi = std::max(b.sup_phi, std::abs(p.phi(r)));
        if (r >= 1.0) {
            const double d1 = std::abs(p.phi_prime(r));
            if (d1 > worst_prime) {
                worst_prime = d1;
                worst_prime_r = r;
            }
            b.sup_phi_second = std::max(b.sup_phi_second, std::abs(p.phi_second(r)));
        }
    }
    // One-sided junction limits (the grid may straddle them).
    for (double r : {1.0, p.j_plateau_end(), p.j_linear_end(), p.support_end()}) {
        for (double rr : {std::nextafter(r, 0.0), r}) {
            const double d1 = std::abs(p.phi_prime(rr));
            if (d1 > worst_prime) {
                worst_prime = d1;
                worst_prime_r = rr;
            }
            b.sup_phi_second = std::max(b.sup_phi_second, std::abs(p.phi_second(rr)));
        }
    }
    b.sup_phi_prime = worst_prime;
    p.bounds_ = b;

    if (worst_prime > budget) {
        std::string region;
        if (worst_prime_r <= p.j_plateau_end())
            region = "connector A (power joint at r=1)";
        else if (worst_prime_r <= p.j_linear_end())
            region = "linear descent";
        else
            region = "connector B (tail joint)";
        throw ProfileBoundError("cutoff slope bound exceeded in " + region + ": |phi'|=" +
                                    std::to_string(worst_prime) + " > " + std::to_string(budget) +
                                    " (rho too large for this s)",
                                region);
    }
    return p;
}

double SmoothingProfile::phi(double r) const {
    if (r < 0.0) throw PreconditionError("phi requires r >= 0");
    if (r <= 1.0) return std::pow(r, 0.5 * (s_ + 1.0));
    if (r < j_plateau_end()) return conn_a_.eval(r);
    if (r <= j_linear_end()) return -r / rho_ + 1.0 + rho_ + 1.0 / rho_;
    if (r < support_end()) return conn_b_.eval(r);
    return 0.0;
}

double SmoothingProfile::phi_prime(double r) const {
    if (r < 0.0) throw PreconditionError("phi_prime requires r >= 0");
    const double e = 0.5 * (s_ + 1.0);
    if (r <= 1.0) return e * std::pow(r, e - 1.0);
    if (r < j_plateau_end()) return conn_a_.deriv(r);
    if (r <= j_linear_end()) return -1.0 / rho_;
    if (r < support_end()) return conn_b_.deriv(r);
    return 0.0;
}

double SmoothingProfile::phi_second(double r) const {
    if (r < 0.0) throw PreconditionError("phi_second requires r >= 0");
    const double e = 0.5 * (s_ + 1.0);
    if (r <= 1.0) return e * (e - 1.0) * std::pow(r, e - 2.0);
    if (r < j_plateau_end()) return conn_a_.second(r);
    if (r <= j_linear_end()) return 0.0;
    if (r < support_end()) return conn_b_.second(r);
    return 0.0;
}

double SmoothingProfile::kernel_support_radius(double eps) const {
    return eps * std::sqrt(support_end());
}

Vec SmoothingProfile::kernel(const Vec& d, double eps) const {
    const double n2 = d.norm2();
    if (n2 == 0.0) return Vec::zero(d.dim());
    const double u = n2 / (eps * eps);
    if (u >= support_end()) return Vec::zero(d.dim());
    if (u <= 1.0) return d * (1.0 / std::pow(eps, s_ + 1.0));
    return d * (phi(u) / std::pow(std::sqrt(n2), s_ + 1.0));
}

namespace {

template <class F>
double one_sided_deriv(const F& f, double x, double h, int sign) {
    const double s = static_cast<double>(sign);
    return s *
           (25.0 * f(x) - 48.0 * f(x + s * h) + 36.0 * f(x + 2.0 * s * h) -
            16.0 * f(x + 3.0 * s * h) + 3.0 * f(x + 4.0 * s * h)) /
           (12.0 * h);
}

}  // namespace

std::vector<JunctionReport> junction_continuity_probe(const SmoothingProfile& p) {
    auto phi = [&](double x) { return p.phi(x); };
    auto phi_prime = [&](double x) { return p.phi_prime(x); };
    const double rho = p.rho();
    const double w_a = rho * rho;

    struct Site {
        double r;
        double width_left;
        double width_right;
    };
    const Site sites[4] = {{p.j_power_end(), 1.0, w_a},
                           {p.j_plateau_end(), w_a, rho},
                           {p.j_linear_end(), rho, w_a},
                           {p.support_end(), w_a, w_a}};

    std::vector<JunctionReport> out;
    for (const Site& site : sites) {
        const double hl = site.width_left / 1024.0;
        const double hr = site.width_right / 1024.0;
        JunctionReport rep;
        rep.r = site.r;
        rep.value_gap =
            std::abs(p.phi(std::nextafter(site.r, 0.0)) - p.phi(std::nextafter(site.r, site.r + 1.0)));
        rep.deriv_gap =
            std::abs(one_sided_deriv(phi, site.r, hl, -1) - one_sided_deriv(phi, site.r, hr, +1));
        rep.second_gap = std::abs(one_sided_deriv(phi_prime, site.r, hl, -1) -
                                  one_sided_deriv(phi_prime, site.r, hr, +1));
        out.push_back(rep);
    }
    return out;
}

}  // namespace rieszlab
