#include "rieszlab/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rieszlab {

namespace {
constexpr std::uint32_t kLeafSize = 32;
// Conservative slack on box culling: a box is skipped only when it is
// strictly farther than the query radius by more than accumulated rounding.
constexpr double kCullSlack = 1e-12;
}  // namespace

SpatialIndex::SpatialIndex(std::span<const double> positions, int dim)
    : dim_(dim),
      count_(static_cast<std::uint32_t>(positions.size() / static_cast<std::size_t>(dim))),
      pos_(positions.begin(), positions.end()) {
    perm_.resize(count_);
    for (std::uint32_t i = 0; i < count_; ++i) perm_[i] = i;
    if (count_ > 0) root_ = build(0, count_);
}

int SpatialIndex::build(std::uint32_t begin, std::uint32_t end) {
    Node node;
    node.begin = begin;
    node.end = end;
    for (int a = 0; a < dim_; ++a) {
        node.lo[a] = std::numeric_limits<double>::infinity();
        node.hi[a] = -std::numeric_limits<double>::infinity();
    }
    for (std::uint32_t i = begin; i < end; ++i) {
        const double* p = &pos_[static_cast<std::size_t>(perm_[i]) * dim_];
        for (int a = 0; a < dim_; ++a) {
            node.lo[a] = std::min(node.lo[a], p[a]);
            node.hi[a] = std::max(node.hi[a], p[a]);
        }
    }

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    if (end - begin > kLeafSize) {
        int axis = 0;
        double widest = -1.0;
        for (int a = 0; a < dim_; ++a) {
            const double w = node.hi[a] - node.lo[a];
            if (w > widest) {
                widest = w;
                axis = a;
            }
        }
        if (widest > 0.0) {
            const std::uint32_t mid = begin + (end - begin) / 2;
            std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                             [&](std::uint32_t x, std::uint32_t y) {
                                 const double px = pos_[static_cast<std::size_t>(x) * dim_ + axis];
                                 const double py = pos_[static_cast<std::size_t>(y) * dim_ + axis];
                                 if (px != py) return px < py;
                                 return x < y;
                             });
            const int left = build(begin, mid);
            const int right = build(mid, end);
            nodes_[static_cast<std::size_t>(id)].left = left;
            nodes_[static_cast<std::size_t>(id)].right = right;
        }
        // widest == 0 means all positions in this range coincide; keep as leaf.
    }
    return id;
}

double SpatialIndex::box_min_dist2(const Node& n, const Vec& p) const {
    double acc = 0.0;
    for (int a = 0; a < dim_; ++a) {
        double d = 0.0;
        if (p[a] < n.lo[a])
            d = n.lo[a] - p[a];
        else if (p[a] > n.hi[a])
            d = p[a] - n.hi[a];
        acc += d * d;
    }
    return acc;
}

void SpatialIndex::ball_query(const Vec& center, double radius, std::vector<BallHit>& out) const {
    out.clear();
    if (count_ == 0 || radius <= 0.0) return;
    const double r2 = radius * radius;
    const double cull = r2 * (1.0 + kCullSlack);

    int stack[128];
    int top = 0;
    stack[top++] = root_;
    while (top > 0) {
        const Node& n = nodes_[static_cast<std::size_t>(stack[--top])];
        if (box_min_dist2(n, center) > cull) continue;
        if (n.left < 0) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) {
                const std::uint32_t idx = perm_[i];
                const double d2 = point_dist2(&pos_[static_cast<std::size_t>(idx) * dim_], center, dim_);
                if (d2 < r2) out.push_back({idx, d2});
            }
        } else {
            stack[top++] = n.left;
            stack[top++] = n.right;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const BallHit& a, const BallHit& b) { return a.index < b.index; });
}

void SpatialIndex::nearest_search(int node, const Vec& p, std::uint32_t self, double& best2) const {
    const Node& n = nodes_[static_cast<std::size_t>(node)];
    if (box_min_dist2(n, p) >= best2) return;
    if (n.left < 0) {
        for (std::uint32_t i = n.begin; i < n.end; ++i) {
            const std::uint32_t idx = perm_[i];
            if (idx == self) continue;
            const double d2 = point_dist2(&pos_[static_cast<std::size_t>(idx) * dim_], p, dim_);
            if (d2 < best2) best2 = d2;
        }
        return;
    }
    const double dl = box_min_dist2(nodes_[static_cast<std::size_t>(n.left)], p);
    const double dr = box_min_dist2(nodes_[static_cast<std::size_t>(n.right)], p);
    if (dl <= dr) {
        nearest_search(n.left, p, self, best2);
        nearest_search(n.right, p, self, best2);
    } else {
        nearest_search(n.right, p, self, best2);
        nearest_search(n.left, p, self, best2);
    }
}

double SpatialIndex::nearest_gap(std::uint32_t index) const {
    if (count_ < 2) return std::numeric_limits<double>::infinity();
    const Vec p = Vec::from(std::span<const double>(&pos_[static_cast<std::size_t>(index) * dim_],
                                                    static_cast<std::size_t>(dim_)));
    double best2 = std::numeric_limits<double>::infinity();
    nearest_search(root_, p, index, best2);
    return std::sqrt(best2);
}

double SpatialIndex::min_pairwise_gap() const {
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < count_; ++i) best = std::min(best, nearest_gap(i));
    return best;
}

}  // namespace rieszlab
