#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mopuc/linalg.hpp"
#include "mopuc/measures.hpp"
#include "mopuc/multi_index.hpp"
#include "mopuc/poly.hpp"
#include "mopuc/scalar.hpp"

namespace mopuc {

struct NotNormalError : std::runtime_error {
    explicit NotNormalError(const MultiIndex& n)
        : std::runtime_error("index " + n.str() + " is not normal"), index(n) {}
    MultiIndex index;
};

struct ZeroIndexError : std::invalid_argument {
    ZeroIndexError() : std::invalid_argument("operation undefined at the zero index") {}
};

// Moment matrix of an index: block row j holds n_j shifted moment rows of
// measure j; entry (block j, row q, column c) is nu_j^{c-q}.
template <ScalarField S>
struct MomentMatrix {
    MultiIndex index;
    Matrix<S> m;
};

struct NormalityInfo {
    bool normal = false;
    // Float classification flagged unreliable: Hadamard-normalized |det|
    // sits below kIndeterminateDetEps. Always false on the exact backend.
    bool indeterminate = false;
    bool det_exactly_zero = false;  // exact backend only
    double abs_det = 0.0;
    double normalized_abs_det = 0.0;
    std::optional<double> rcond;  // float backend only
};

// The polynomial families of one measure system, with per-index caching.
// All accessors are const and safe to call concurrently: cache writes are
// idempotent single-key inserts.
template <ScalarField S>
class Lattice {
public:
    Lattice(std::shared_ptr<const MeasureSystem<S>> system, TolerancePolicy pol = {})
        : sys_(std::move(system)), pol_(pol) {
        if (!sys_) throw std::invalid_argument("Lattice: null measure system");
        pol_.validate();
    }

    int r() const { return sys_->size(); }
    const MeasureSystem<S>& system() const { return *sys_; }
    const TolerancePolicy& policy() const { return pol_; }

    // <f, g>_j = sum_{a,b} f_a conj(g_b) nu_j^{a-b}.
    S inner(int j, const Poly<S>& f, const Poly<S>& g) const {
        S acc{};
        const auto& fc = f.coeffs();
        const auto& gc = g.coeffs();
        for (size_t a = 0; a < fc.size(); ++a)
            for (size_t b = 0; b < gc.size(); ++b)
                acc = acc + fc[a] * conj(gc[b]) * sys_->moment(j, static_cast<long>(a) - static_cast<long>(b));
        return acc;
    }

    MomentMatrix<S> moment_matrix(const MultiIndex& n) const {
        check_dim(n);
        if (n.is_zero()) throw std::invalid_argument("moment_matrix: zero index");
        const int size = n.norm();
        Matrix<S> m(size, size);
        int row = 0;
        for (int j = 1; j <= r(); ++j)
            for (int q = 0; q < n[j]; ++q, ++row)
                for (int c = 0; c < size; ++c) m.at(row, c) = sys_->moment(j, c - q);
        return {n, std::move(m)};
    }

    // The zero index is normal by definition. Exact backend decides by a
    // fraction-free determinant; the float backend classifies by reciprocal
    // condition number, since |det| alone scales with matrix size.
    const NormalityInfo& is_normal(const MultiIndex& n) const {
        check_dim(n);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(n);
            if (it != cache_.end() && it->second.normality) return *it->second.normality;
        }
        NormalityInfo info = compute_normality(n);
        std::unique_lock lock(mutex_);
        auto& entry = cache_[n];
        if (!entry.normality) entry.normality = std::move(info);
        return *entry.normality;
    }

    // Monic type II polynomial, degree |n|.
    const Poly<S>& type2(const MultiIndex& n) const {
        return cached(n, &Entry::phi, [&] { return solve_type2(n); });
    }

    // Type II* polynomial, constant term 1, degree <= |n|.
    const Poly<S>& type2star(const MultiIndex& n) const {
        return cached(n, &Entry::phistar, [&] { return solve_type2star(n); });
    }

    // Type I vector, normalized so the top-power bracket sums to 1.
    const PolyVector<S>& type1(const MultiIndex& n) const {
        check_dim(n);
        if (n.is_zero()) throw ZeroIndexError();
        return cached(n, &Entry::lambda, [&] { return solve_type1(n, /*star=*/false); });
    }

    // Type I* vector, normalized so the constant bracket sums to 1;
    // the zero index maps to the zero vector by convention.
    const PolyVector<S>& type1star(const MultiIndex& n) const {
        return cached(n, &Entry::lambdastar, [&] {
            if (n.is_zero()) return PolyVector<S>::zero(r());
            return solve_type1(n, /*star=*/true);
        });
    }

    // Phi_n with the out-of-lattice convention Phi_n = 0.
    Poly<S> phi_or_zero(const MultiIndex& n) const {
        return n.in_lattice() ? type2(n) : Poly<S>::zero();
    }

    // Lambda_0 = 0 by definition; elsewhere the normalized type I vector.
    PolyVector<S> lambda_or_zero(const MultiIndex& n) const {
        return n.is_zero() ? PolyVector<S>::zero(r()) : type1(n);
    }

    void require_normal(const MultiIndex& n) const {
        if (!is_normal(n).normal) throw NotNormalError(n);
    }

private:
    struct Entry {
        std::optional<NormalityInfo> normality;
        std::optional<Poly<S>> phi, phistar;
        std::optional<PolyVector<S>> lambda, lambdastar;
    };

    void check_dim(const MultiIndex& n) const {
        if (n.dim() != r()) throw std::invalid_argument("multi-index dimension != system size");
        if (!n.in_lattice()) throw std::invalid_argument("multi-index outside Z_+^r: " + n.str());
    }

    template <class Member, class Fn>
    const auto& cached(const MultiIndex& n, Member member, Fn&& compute) const {
        check_dim(n);
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(n);
            if (it != cache_.end() && it->second.*member) return *(it->second.*member);
        }
        auto value = compute();
        std::unique_lock lock(mutex_);
        auto& entry = cache_[n];
        if (!(entry.*member)) entry.*member = std::move(value);
        return *(entry.*member);
    }

    NormalityInfo compute_normality(const MultiIndex& n) const {
        NormalityInfo info;
        if (n.is_zero()) {
            info.normal = true;
            info.abs_det = 1.0;
            info.normalized_abs_det = 1.0;
            if constexpr (!kExactScalar<S>) info.rcond = 1.0;
            return info;
        }
        auto mm = moment_matrix(n);
        if constexpr (kExactScalar<S>) {
            S det = bareiss_det(mm.m);
            info.det_exactly_zero = (det == S{});
            info.normal = !info.det_exactly_zero;
            info.abs_det = abs_approx(det);
            info.normalized_abs_det = hadamard_normalized_det(mm.m, info.abs_det);
        } else {
            auto f = lu_factor(mm.m, pol_);
            info.abs_det = f.singular ? 0.0 : abs_approx(f.det);
            info.normalized_abs_det = hadamard_normalized_det(mm.m, info.abs_det);
            double rc = f.singular ? 0.0 : rcond_estimate(mm.m, pol_);
            info.rcond = rc;
            info.normal = rc > pol_.rcond_min;
            info.indeterminate = info.normalized_abs_det < kIndeterminateDetEps;
        }
        return info;
    }

    Poly<S> solve_type2(const MultiIndex& n) const {
        if (n.is_zero()) return Poly<S>::one();
        require_normal(n);
        const int size = n.norm();
        auto mm = moment_matrix(n);
        std::vector<S> rhs(static_cast<size_t>(size));
        int row = 0;
        for (int j = 1; j <= r(); ++j)
            for (int q = 0; q < n[j]; ++q, ++row) rhs[static_cast<size_t>(row)] = -sys_->moment(j, size - q);
        auto c = solve(mm.m, rhs, pol_);
        if (!c) throw NotNormalError(n);
        c->push_back(scalar_from_int<S>(1));  // monic top coefficient
        return Poly<S>(std::move(*c));
    }

    Poly<S> solve_type2star(const MultiIndex& n) const {
        if (n.is_zero()) return Poly<S>::one();
        require_normal(n);
        const int size = n.norm();
        auto mm = moment_matrix(n);
        std::vector<S> rhs(static_cast<size_t>(size));
        int row = 0;
        for (int j = 1; j <= r(); ++j)
            for (int q = 0; q < n[j]; ++q, ++row) rhs[static_cast<size_t>(row)] = -sys_->moment(j, -(q + 1));
        auto x = solve(mm.m, rhs, pol_);
        if (!x) throw NotNormalError(n);
        std::vector<S> coeffs(static_cast<size_t>(size) + 1);
        coeffs[0] = scalar_from_int<S>(1);
        for (int i = 0; i < size; ++i) coeffs[static_cast<size_t>(i) + 1] = (*x)[static_cast<size_t>(i)];
        return Poly<S>(std::move(coeffs));
    }

    // Both type I normalizations solve the same transposed-moment system;
    // only the right-hand side row differs (top power vs constant).
    PolyVector<S> solve_type1(const MultiIndex& n, bool star) const {
        require_normal(n);
        const int size = n.norm();
        Matrix<S> a(size, size);
        for (int p = 0; p < size; ++p) {
            int col = 0;
            for (int j = 1; j <= r(); ++j)
                for (int q = 0; q < n[j]; ++q, ++col) a.at(p, col) = sys_->moment(j, q - p);
        }
        std::vector<S> rhs(static_cast<size_t>(size), S{});
        rhs[star ? 0 : static_cast<size_t>(size - 1)] = scalar_from_int<S>(1);
        auto x = solve(a, rhs, pol_);
        if (!x) throw NotNormalError(n);
        std::vector<Poly<S>> slots(static_cast<size_t>(r()));
        int col = 0;
        for (int j = 1; j <= r(); ++j) {
            std::vector<S> coeffs(static_cast<size_t>(n[j]));
            for (int q = 0; q < n[j]; ++q, ++col) coeffs[static_cast<size_t>(q)] = (*x)[static_cast<size_t>(col)];
            slots[static_cast<size_t>(j - 1)] = Poly<S>(std::move(coeffs));
        }
        return PolyVector<S>(std::move(slots));
    }

    std::shared_ptr<const MeasureSystem<S>> sys_;
    TolerancePolicy pol_;
    mutable std::shared_mutex mutex_;
    mutable std::map<MultiIndex, Entry> cache_;
};

// Free-function spellings of the core operations.
template <ScalarField S>
S inner(const Lattice<S>& lat, int j, const Poly<S>& f, const Poly<S>& g) {
    return lat.inner(j, f, g);
}
template <ScalarField S>
MomentMatrix<S> assemble_moment_matrix(const Lattice<S>& lat, const MultiIndex& n) {
    return lat.moment_matrix(n);
}

}  // namespace mopuc
