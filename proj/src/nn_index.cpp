#include "tubemeasure/nn_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tubemeasure {

namespace {
constexpr std::uint32_t kLeafSize = 16;
constexpr int kMaxTreeDim = 16;
constexpr int kMaxDepthStack = 96; // median splits keep the depth logarithmic
} // namespace

NearestIndex::NearestIndex(const PointCloud& cloud) : cloud_(&cloud), dim_(cloud.dim()) {
    const std::size_t m = cloud.size();
    perm_.resize(m);
    for (std::size_t i = 0; i < m; ++i) perm_[i] = static_cast<std::uint32_t>(i);

    brute_ = dim_ > kMaxTreeDim;
    if (brute_) return;

    nodes_.reserve(2 * m / kLeafSize + 2);
    std::vector<double> tmp_lo(dim_), tmp_hi(dim_);
    build(0, static_cast<std::uint32_t>(m), tmp_lo, tmp_hi);

    // Reorder coordinates into tree layout for cache-friendly leaf scans.
    pts_.resize(m * static_cast<std::size_t>(dim_));
    for (std::size_t i = 0; i < m; ++i) {
        auto src = cloud[perm_[i]];
        std::copy(src.begin(), src.end(), pts_.begin() + i * static_cast<std::size_t>(dim_));
    }
}

std::uint32_t NearestIndex::build(std::uint32_t begin, std::uint32_t end,
                                  std::vector<double>& tmp_lo, std::vector<double>& tmp_hi) {
    const std::uint32_t id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, 0, 0, -1, 0.0});

    for (int d = 0; d < dim_; ++d) {
        tmp_lo[d] = std::numeric_limits<double>::infinity();
        tmp_hi[d] = -std::numeric_limits<double>::infinity();
    }
    const PointCloud& c = *cloud_;
    for (std::uint32_t i = begin; i < end; ++i) {
        auto p = c[perm_[i]];
        for (int d = 0; d < dim_; ++d) {
            tmp_lo[d] = std::min(tmp_lo[d], p[d]);
            tmp_hi[d] = std::max(tmp_hi[d], p[d]);
        }
    }
    box_lo_.insert(box_lo_.end(), tmp_lo.begin(), tmp_lo.end());
    box_hi_.insert(box_hi_.end(), tmp_hi.begin(), tmp_hi.end());

    int widest = 0;
    double extent = -1.0;
    for (int d = 0; d < dim_; ++d) {
        const double e = tmp_hi[d] - tmp_lo[d];
        if (e > extent) {
            extent = e;
            widest = d;
        }
    }
    if (end - begin <= kLeafSize || extent <= 0.0) {
        return id; // leaf (extent 0 means all points coincide)
    }

    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) { return c[a][widest] < c[b][widest]; });
    nodes_[id].split_dim = widest;
    nodes_[id].split_val = c[perm_[mid]][widest];

    const std::uint32_t l = build(begin, mid, tmp_lo, tmp_hi);
    nodes_[id].left = l;
    const std::uint32_t r = build(mid, end, tmp_lo, tmp_hi);
    nodes_[id].right = r;
    return id;
}

namespace {

template <int DIM>
inline double dist2_t(const double* a, const double* b, int dim) {
    double acc = 0.0;
    const int n = DIM > 0 ? DIM : dim;
    for (int d = 0; d < n; ++d) {
        const double t = a[d] - b[d];
        acc += t * t;
    }
    return acc;
}

} // namespace

template <int DIM>
std::size_t NearestIndex::count_impl(const double* q, double r2) const {
    const int dim = DIM > 0 ? DIM : dim_;
    std::uint32_t stack[kMaxDepthStack];
    int top = 0;
    stack[top++] = 0;
    std::size_t count = 0;
    while (top > 0) {
        const std::uint32_t id = stack[--top];
        const Node& n = nodes_[id];
        const double* lo = box_lo_.data() + static_cast<std::size_t>(id) * dim;
        const double* hi = box_hi_.data() + static_cast<std::size_t>(id) * dim;
        double mind2 = 0.0, maxd2 = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double below = lo[d] - q[d];
            const double above = q[d] - hi[d];
            const double gap = std::max({below, above, 0.0});
            mind2 += gap * gap;
            const double far = std::max(q[d] - lo[d], hi[d] - q[d]);
            maxd2 += far * far;
        }
        if (mind2 > r2) continue;
        if (maxd2 <= r2) {
            count += n.end - n.begin;
            continue;
        }
        if (n.left == 0) {
            const double* base = pts_.data() + static_cast<std::size_t>(n.begin) * dim;
            for (std::uint32_t i = n.begin; i < n.end; ++i, base += dim) {
                if (dist2_t<DIM>(q, base, dim) <= r2) ++count;
            }
            continue;
        }
        stack[top++] = n.left;
        stack[top++] = n.right;
    }
    return count;
}

template <int DIM>
void NearestIndex::nearest_impl(std::uint32_t node, const double* q, double& best_d2,
                                std::size_t& best_idx) const {
    const int dim = DIM > 0 ? DIM : dim_;
    const Node& n = nodes_[node];
    if (n.left == 0) {
        const double* base = pts_.data() + static_cast<std::size_t>(n.begin) * dim;
        for (std::uint32_t i = n.begin; i < n.end; ++i, base += dim) {
            const double d2 = dist2_t<DIM>(q, base, dim);
            const std::size_t orig = perm_[i];
            if (d2 < best_d2 || (d2 == best_d2 && orig < best_idx)) {
                best_d2 = d2;
                best_idx = orig;
            }
        }
        return;
    }
    std::uint32_t first = n.left, second = n.right;
    if (q[n.split_dim] > n.split_val) std::swap(first, second);
    auto box_min2 = [&](std::uint32_t id) {
        const double* lo = box_lo_.data() + static_cast<std::size_t>(id) * dim;
        const double* hi = box_hi_.data() + static_cast<std::size_t>(id) * dim;
        double acc = 0.0;
        for (int d = 0; d < dim; ++d) {
            const double gap = std::max({lo[d] - q[d], q[d] - hi[d], 0.0});
            acc += gap * gap;
        }
        return acc;
    };
    // <= keeps equal-distance candidates reachable so the lowest index wins ties.
    if (box_min2(first) <= best_d2) nearest_impl<DIM>(first, q, best_d2, best_idx);
    if (box_min2(second) <= best_d2) nearest_impl<DIM>(second, q, best_d2, best_idx);
}

NearestIndex::Hit NearestIndex::nearest(std::span<const double> q) const {
    if (static_cast<int>(q.size()) != dim_) {
        throw std::invalid_argument("nearest: query dimension mismatch");
    }
    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best_idx = std::numeric_limits<std::size_t>::max();
    if (brute_) {
        const PointCloud& c = *cloud_;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double d2 = squared_distance(q, c[i]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best_idx = i;
            }
        }
    } else {
        switch (dim_) {
            case 1: nearest_impl<1>(0, q.data(), best_d2, best_idx); break;
            case 2: nearest_impl<2>(0, q.data(), best_d2, best_idx); break;
            case 3: nearest_impl<3>(0, q.data(), best_d2, best_idx); break;
            default: nearest_impl<0>(0, q.data(), best_d2, best_idx); break;
        }
    }
    return {best_idx, std::sqrt(best_d2)};
}

std::size_t NearestIndex::count_within(std::span<const double> q, double radius) const {
    if (static_cast<int>(q.size()) != dim_) {
        throw std::invalid_argument("count_within: query dimension mismatch");
    }
    if (!(radius > 0.0)) {
        throw std::invalid_argument("count_within: radius must be positive");
    }
    const double r2 = radius * radius;
    if (brute_) {
        const PointCloud& c = *cloud_;
        std::size_t count = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (squared_distance(q, c[i]) <= r2) ++count;
        }
        return count;
    }
    switch (dim_) {
        case 1: return count_impl<1>(q.data(), r2);
        case 2: return count_impl<2>(q.data(), r2);
        case 3: return count_impl<3>(q.data(), r2);
        default: return count_impl<0>(q.data(), r2);
    }
}

} // namespace tubemeasure
