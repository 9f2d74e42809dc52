#pragma once

#include <array>
#include <string>
#include <vector>

#include "rieszlab/vec.hpp"

namespace rieszlab {

/// Degree-5 polynomial on [a, b] in the normalized coordinate t = (r-a)/(b-a),
/// matching value, first and second derivative at both endpoints.
struct QuinticPiece {
    double a = 0.0;
    double b = 1.0;
    std::array<double, 6> c{};

    static QuinticPiece hermite(double a, double b, double p0, double m0, double k0, double p1,
                                double m1, double k1);

    double eval(double r) const;
    double deriv(double r) const;
    double second(double r) const;
};

/// C^2 cutoff used to mollify the truncated transform:
///
///   phi(r) = r^((s+1)/2)                 on [0, 1]
///   phi(r) = quintic connector           on [1, 1+rho^2]
///   phi(r) = -r/rho + 1 + rho + 1/rho    on [1+rho^2, 1+rho^2+rho]
///   phi(r) = quintic connector           on [1+rho^2+rho, 1+rho+2rho^2]
///   phi(r) = 0                           on [1+rho+2rho^2, inf)
///
/// The plateau phi(1+rho^2) = 1 and the -1/rho descent are what make the
/// induced kernel integrate the unit-ball contribution exactly; the quintics
/// are the minimal closed-form C^2 joints. Derivative bounds are validated on
/// a grid over the transition region r >= 1 (on [0, 1) the composite kernel
/// is exactly linear, so the raw phi' there never enters any estimate).
class SmoothingProfile {
public:
    struct Bounds {
        double sup_phi = 0.0;         // over the full support grid
        double sup_phi_prime = 0.0;   // over the transition grid r >= 1
        double sup_phi_second = 0.0;  // over the transition grid r >= 1
        int grid_points = 0;
    };

    /// Throws ProfileBoundError when |phi'| exceeds (1/rho)(1+slack) on the
    /// validation grid; the error names the offending region.
    static SmoothingProfile build(double s, double rho, double validation_slack = 0.05);

    double s() const { return s_; }
    double rho() const { return rho_; }
    double validation_slack() const { return slack_; }
    const Bounds& bounds() const { return bounds_; }

    // Junctions, in increasing order.
    double j_power_end() const { return 1.0; }
    double j_plateau_end() const { return 1.0 + rho_ * rho_; }
    double j_linear_end() const { return 1.0 + rho_ * rho_ + rho_; }
    double support_end() const { return 1.0 + rho_ + 2.0 * rho_ * rho_; }

    double phi(double r) const;
    double phi_prime(double r) const;
    double phi_second(double r) const;

    const QuinticPiece& connector_a() const { return conn_a_; }
    const QuinticPiece& connector_b() const { return conn_b_; }

    /// Radius beyond which the induced kernel at scale eps vanishes;
    /// always below 3*eps for rho < 1/2.
    double kernel_support_radius(double eps) const;

    /// k(d) = phi(|d|^2/eps^2) d / |d|^(s+1), continuously extended by
    /// k(0) = 0. Inside |d| <= eps this reduces to d / eps^(s+1) exactly.
    Vec kernel(const Vec& d, double eps) const;

private:
    SmoothingProfile() = default;

    double s_ = 0.0;
    double rho_ = 0.0;
    double slack_ = 0.0;
    QuinticPiece conn_a_;
    QuinticPiece conn_b_;
    Bounds bounds_;
};

/// One-sided finite-difference mismatch of phi, phi', phi'' across a junction.
struct JunctionReport {
    double r = 0.0;
    double value_gap = 0.0;
    double deriv_gap = 0.0;
    double second_gap = 0.0;
};

/// Probes all four junctions with 4th-order one-sided stencils scaled to the
/// adjacent piece widths. A correctly built profile lands well under 1e-6 on
/// every gap.
std::vector<JunctionReport> junction_continuity_probe(const SmoothingProfile& profile);

}  // namespace rieszlab
