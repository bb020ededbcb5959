#pragma once

// Weighted sampling index over per-item nonnegative rates: O(log n) update,
// O(log n) proportional sampling. Implemented as a flat binary sum tree.
// An update rewrites the leaf and recomputes each ancestor as the sum of its
// two children, so internal sums never accumulate incremental rounding drift;
// the only error in total() is the rounding of one bottom-up summation of the
// current leaves.

#include <cassert>
#include <cstddef>
#include <vector>

namespace dcp {

class WeightedIndex {
public:
    WeightedIndex() = default;

    explicit WeightedIndex(std::size_t n) { reset(n); }

    void reset(std::size_t n) {
        n_ = n;
        cap_ = 1;
        while (cap_ < n_) cap_ <<= 1;
        tree_.assign(2 * cap_, 0.0);
    }

    std::size_t size() const { return n_; }

    double get(std::size_t i) const { return tree_[cap_ + i]; }

    double total() const { return tree_[1]; }

    void set(std::size_t i, double w) {
        assert(i < n_ && w >= 0.0);
        std::size_t v = cap_ + i;
        tree_[v] = w;
        for (v >>= 1; v >= 1; v >>= 1) {
            tree_[v] = tree_[2 * v] + tree_[2 * v + 1];
            if (v == 1) break;
        }
    }

    // Rebuild every internal node from the current leaves.
    void rebuild() {
        for (std::size_t v = cap_ - 1; v >= 1; --v)
            tree_[v] = tree_[2 * v] + tree_[2 * v + 1];
    }

    // Bulk-assign all leaf weights, then rebuild.
    void assign(const std::vector<double>& w) {
        assert(w.size() == n_);
        for (std::size_t i = 0; i < n_; ++i) tree_[cap_ + i] = w[i];
        for (std::size_t i = n_; i < cap_; ++i) tree_[cap_ + i] = 0.0;
        rebuild();
    }

    // Index i such that r falls in its weight slab; r should lie in
    // [0, total()). Rounding at slab boundaries is resolved toward the
    // nearest item with positive weight.
    std::size_t sample(double r) const {
        std::size_t v = 1;
        while (v < cap_) {
            const double left = tree_[2 * v];
            if (r < left) {
                v = 2 * v;
            } else {
                r -= left;
                v = 2 * v + 1;
            }
        }
        std::size_t i = v - cap_;
        if (tree_[v] <= 0.0) {
            // r landed on a zero-weight leaf through rounding; take the
            // nearest positive-weight neighbor.
            std::size_t lo = i, hi = i;
            while (true) {
                if (hi + 1 < n_ && tree_[cap_ + ++hi] > 0.0) return hi;
                if (lo > 0 && tree_[cap_ + --lo] > 0.0) return lo;
                if (lo == 0 && hi + 1 >= n_) break;
            }
        }
        return i;
    }

private:
    std::size_t n_ = 0;
    std::size_t cap_ = 1;
    std::vector<double> tree_;
};

}  // namespace dcp
