#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rieszlab/vec.hpp"

namespace rieszlab {

/// One atom falling inside a queried ball.
struct BallHit {
    std::uint32_t index;  // atom index in the owning measure's canonical order
    double dist2;         // squared distance to the query center
};

/// Fixed-depth kd partition over a flat point array. The tree is a pure
/// culling structure: every candidate atom is tested individually with the
/// shared point_dist2 arithmetic and hits are emitted in ascending atom
/// index, so a query selects exactly the same atom set, in the same order,
/// as a linear scan.
class SpatialIndex {
public:
    SpatialIndex() = default;

    /// positions has size count*dim, laid out row-major per atom.
    SpatialIndex(std::span<const double> positions, int dim);

    int dim() const { return dim_; }
    std::uint32_t size() const { return count_; }

    /// All atoms with |pos - center| < radius (strict), sorted by index.
    void ball_query(const Vec& center, double radius, std::vector<BallHit>& out) const;

    std::vector<BallHit> ball_query(const Vec& center, double radius) const {
        std::vector<BallHit> out;
        ball_query(center, radius, out);
        return out;
    }

    /// Distance from atom `index` to its nearest distinct-position neighbor.
    /// Returns +inf for a single-atom set.
    double nearest_gap(std::uint32_t index) const;

    /// Smallest pairwise gap over all atoms (+inf for < 2 atoms).
    double min_pairwise_gap() const;

private:
    struct Node {
        double lo[kMaxDim];
        double hi[kMaxDim];
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    int build(std::uint32_t begin, std::uint32_t end);
    double box_min_dist2(const Node& n, const Vec& p) const;
    void nearest_search(int node, const Vec& p, std::uint32_t self, double& best2) const;

    int dim_ = 0;
    std::uint32_t count_ = 0;
    std::vector<double> pos_;            // copy in original atom order
    std::vector<std::uint32_t> perm_;    // leaf-contiguous permutation of atom indices
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace rieszlab
