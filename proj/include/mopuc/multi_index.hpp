#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mopuc {

// Point of Z_+^r. Entries are orthogonality-condition counts per measure;
// arithmetic that would leave Z_+^r is allowed to produce invalid indices,
// which callers test with in_lattice().
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries) : n_(std::move(entries)) {}
    static MultiIndex zero(int r) { return MultiIndex(std::vector<int>(r, 0)); }
    // j is 1-based.
    static MultiIndex unit(int r, int j) {
        MultiIndex n = zero(r);
        n.n_.at(static_cast<size_t>(j - 1)) = 1;
        return n;
    }

    int dim() const { return static_cast<int>(n_.size()); }
    int operator[](int j) const { return n_.at(static_cast<size_t>(j - 1)); }  // 1-based
    int norm() const { return std::accumulate(n_.begin(), n_.end(), 0); }

    bool in_lattice() const {
        for (int v : n_)
            if (v < 0) return false;
        return true;
    }
    bool is_zero() const {
        for (int v : n_)
            if (v != 0) return false;
        return true;
    }

    std::vector<int> support() const {  // 1-based measure indices with n_j > 0
        std::vector<int> s;
        for (int j = 1; j <= dim(); ++j)
            if ((*this)[j] > 0) s.push_back(j);
        return s;
    }

    MultiIndex plus(int j) const {  // n + e_j
        MultiIndex m = *this;
        m.n_.at(static_cast<size_t>(j - 1)) += 1;
        return m;
    }
    MultiIndex minus(int j) const {  // n - e_j, possibly outside Z_+^r
        MultiIndex m = *this;
        m.n_.at(static_cast<size_t>(j - 1)) -= 1;
        return m;
    }

    bool operator==(const MultiIndex&) const = default;
    auto operator<=>(const MultiIndex&) const = default;

    const std::vector<int>& entries() const { return n_; }

    std::string str() const {
        std::string s = "(";
        for (size_t i = 0; i < n_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(n_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> n_;
};

// All indices of the box [0, max] componentwise, graded lexicographic:
// by |n| first, then lexicographic. Dependency-friendly for cache sweeps.
inline std::vector<MultiIndex> box_indices(const MultiIndex& max) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<size_t>(max.dim()), 0);
    while (true) {
        out.emplace_back(cur);
        int j = max.dim() - 1;
        while (j >= 0) {
            if (cur[static_cast<size_t>(j)] < max[j + 1]) {
                ++cur[static_cast<size_t>(j)];
                break;
            }
            cur[static_cast<size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        int na = a.norm(), nb = b.norm();
        if (na != nb) return na < nb;
        return a.entries() < b.entries();
    });
    return out;
}

// All indices with |n| <= total in dimension r, graded lexicographic.
inline std::vector<MultiIndex> simplex_indices(int r, int total) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<size_t>(r), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == r) {
            out.emplace_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
        cur[static_cast<size_t>(pos)] = 0;
    };
    rec(rec, 0, total);
    std::stable_sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
        int na = a.norm(), nb = b.norm();
        if (na != nb) return na < nb;
        return a.entries() < b.entries();
    });
    return out;
}

}  // namespace mopuc
