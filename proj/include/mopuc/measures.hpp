#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mopuc/scalar.hpp"

namespace mopuc {

// Validation failure in a measure specification. measure_index is 1-based;
// 0 means the failure concerns the system as a whole.
struct MeasureError : std::runtime_error {
    MeasureError(int index, const std::string& what)
        : std::runtime_error(index > 0 ? "measure " + std::to_string(index) + ": " + what : what),
          measure_index(index) {}
    int measure_index;
};

// Density w(theta) = sum_k c_k e^{ik theta} against d(theta)/2pi. The map
// holds the full Hermitian set after validation (missing negatives filled
// with conjugates). Trigonometric moments are coefficient lookups.
template <ScalarField S>
struct TrigDensity {
    std::map<int, S> coeffs;
};

// Probability measure with density proportional to 1/|1 - a e^{i theta}|^2,
// |a| < 1. Single zero only, so moments stay in closed form: nu^p = conj(a)^p.
template <ScalarField S>
struct BernsteinSzego {
    S a;
};

template <ScalarField S>
struct Atom {
    S z;  // |z| = 1
    S w;  // real, >= 0
};

// w0 times normalized Lebesgue measure plus point masses on the circle;
// w0 + sum of atom weights = 1.
template <ScalarField S>
struct LebesgueAtoms {
    S w0;
    std::vector<Atom<S>> atoms;
};

template <ScalarField S>
using MeasureSpec = std::variant<TrigDensity<S>, BernsteinSzego<S>, LebesgueAtoms<S>>;

template <ScalarField S>
S pow_scalar(const S& base, long k) {
    if (k < 0) throw std::invalid_argument("pow_scalar: negative exponent");
    S acc = scalar_from_int<S>(1);
    S b = base;
    while (k > 0) {
        if (k & 1) acc = acc * b;
        b = b * b;
        k >>= 1;
    }
    return acc;
}

namespace detail {

template <ScalarField S>
bool is_real_nonneg(const S& x, const TolerancePolicy& pol) {
    if constexpr (kExactScalar<S>) {
        return x.imag() == 0 && sgn(x.real()) >= 0;
    } else {
        return std::abs(x.imag()) <= pol.zero_eps && x.real() >= -pol.zero_eps;
    }
}

template <ScalarField S>
bool unit_modulus(const S& z, const TolerancePolicy& pol) {
    if constexpr (kExactScalar<S>) {
        return z.abs2() == 1;
    } else {
        return std::abs(std::norm(z) - 1.0) <= pol.zero_eps;
    }
}

template <ScalarField S>
bool strictly_inside_disc(const S& a) {
    if constexpr (kExactScalar<S>) {
        return a.abs2() < 1;
    } else {
        return std::abs(a) < 1.0;
    }
}

}  // namespace detail

// Ordered system of r measures exposing trigonometric moments
// nu_j^p = integral of z^p against the j-th measure. Immutable after
// construction; the per-(j,p) moment memo tolerates concurrent readers
// (writes are idempotent, first one wins).
template <ScalarField S>
class MeasureSystem {
public:
    explicit MeasureSystem(std::vector<MeasureSpec<S>> specs, TolerancePolicy pol = {})
        : specs_(std::move(specs)), memo_(specs_.size()) {
        pol.validate();
        if (specs_.empty()) throw MeasureError(0, "empty system");
        for (int j = 1; j <= size(); ++j) validate_spec(j, pol);
    }

    MeasureSystem(const MeasureSystem&) = delete;
    MeasureSystem& operator=(const MeasureSystem&) = delete;

    int size() const { return static_cast<int>(specs_.size()); }
    const MeasureSpec<S>& spec(int j) const { return specs_.at(static_cast<size_t>(j - 1)); }
    const std::vector<std::string>& warnings() const { return warnings_; }

    // nu_j^p, j in 1..r. Memoized per (j, p).
    S moment(int j, long p) const {
        if (j < 1 || j > size()) throw std::out_of_range("moment: measure index out of range");
        {
            std::shared_lock lock(mutex_);
            auto& m = memo_[static_cast<size_t>(j - 1)];
            auto it = m.find(p);
            if (it != m.end()) return it->second;
        }
        S value = compute_moment(j, p);
        {
            std::unique_lock lock(mutex_);
            auto& m = memo_[static_cast<size_t>(j - 1)];
            return m.emplace(p, std::move(value)).first->second;
        }
    }

private:
    S compute_moment(int j, long p) const {
        const auto& sp = spec(j);
        if (const auto* trig = std::get_if<TrigDensity<S>>(&sp)) {
            auto it = trig->coeffs.find(static_cast<int>(-p));
            return it == trig->coeffs.end() ? S{} : it->second;
        }
        if (const auto* bs = std::get_if<BernsteinSzego<S>>(&sp)) {
            return p >= 0 ? pow_scalar(conj(bs->a), p) : pow_scalar(bs->a, -p);
        }
        const auto& la = std::get<LebesgueAtoms<S>>(sp);
        S acc = (p == 0) ? la.w0 : S{};
        for (const auto& atom : la.atoms) {
            S zp = p >= 0 ? pow_scalar(atom.z, p) : pow_scalar(conj(atom.z), -p);
            acc = acc + atom.w * zp;
        }
        return acc;
    }

    void validate_spec(int j, const TolerancePolicy& pol) {
        auto& sp = specs_[static_cast<size_t>(j - 1)];
        if (auto* trig = std::get_if<TrigDensity<S>>(&sp)) {
            validate_trig(j, *trig, pol);
        } else if (auto* bs = std::get_if<BernsteinSzego<S>>(&sp)) {
            if (!detail::strictly_inside_disc(bs->a)) throw MeasureError(j, "|a| >= 1");
        } else {
            validate_atoms(j, std::get<LebesgueAtoms<S>>(sp), pol);
        }
    }

    void validate_trig(int j, TrigDensity<S>& trig, const TolerancePolicy& pol) {
        auto it0 = trig.coeffs.find(0);
        if (it0 == trig.coeffs.end() || !is_zero(it0->second - scalar_from_int<S>(1), pol))
            throw MeasureError(j, "c_0 != 1 (not a probability normalization)");
        // Fill missing negative-k coefficients by conjugate symmetry; reject
        // pairs that are present but inconsistent.
        std::map<int, S> full = trig.coeffs;
        for (const auto& [k, c] : trig.coeffs) {
            auto it = full.find(-k);
            if (it == full.end()) {
                full.emplace(-k, conj(c));
            } else if (!is_zero(it->second - conj(c), pol)) {
                throw MeasureError(j, "non-Hermitian coefficients");
            }
        }
        trig.coeffs = std::move(full);
        // Nonnegativity is advisory: indefinite densities are legal inputs
        // (they just tend to produce non-normal indices), so sample and warn.
        double min_val = 0.0;
        bool first = true;
        constexpr int kGrid = 1024;
        for (int g = 0; g < kGrid; ++g) {
            double theta = 2.0 * 3.14159265358979323846 * g / kGrid;
            double v = 0.0;
            for (const auto& [k, c] : trig.coeffs) {
                ComplexF cf = to_complexf(c);
                v += (cf * std::exp(ComplexF(0.0, k * theta))).real();
            }
            if (first || v < min_val) min_val = v;
            first = false;
        }
        if (min_val < -1e-9)
            warnings_.push_back("measure " + std::to_string(j) +
                                ": trig density attains negative values (min ~ " +
                                std::to_string(min_val) + "); continuing");
    }

    void validate_atoms(int j, const LebesgueAtoms<S>& la, const TolerancePolicy& pol) {
        if (!detail::is_real_nonneg(la.w0, pol)) throw MeasureError(j, "w0 must be real and >= 0");
        S total = la.w0;
        for (size_t m = 0; m < la.atoms.size(); ++m) {
            const auto& atom = la.atoms[m];
            if (!detail::is_real_nonneg(atom.w, pol))
                throw MeasureError(j, "atom " + std::to_string(m) + ": weight must be real and >= 0");
            if (!detail::unit_modulus(atom.z, pol))
                throw MeasureError(j, "atom " + std::to_string(m) + ": |z| != 1");
            total = total + atom.w;
        }
        if (!is_zero(total - scalar_from_int<S>(1), pol))
            throw MeasureError(j, "weights do not sum to 1");
    }

    std::vector<MeasureSpec<S>> specs_;
    std::vector<std::string> warnings_;
    mutable std::shared_mutex mutex_;
    mutable std::vector<std::map<long, S>> memo_;
};

template <ScalarField S>
S moment(const MeasureSystem<S>& system, int j, long p) {
    return system.moment(j, p);
}

}  // namespace mopuc
