#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mopuc/scalar.hpp"

namespace mopuc {

// Dense polynomial in z, coefficients in ascending degree. Storage keeps no
// trailing coefficients that compare exactly equal to zero; degree() applies
// the backend zero test on top of that, so float dust never inflates degrees.
template <ScalarField S>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<S> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(S v) { return Poly(std::vector<S>{std::move(v)}); }
    static Poly one() { return constant(scalar_from_int<S>(1)); }
    static Poly monomial(int degree, S lead = scalar_from_int<S>(1)) {
        std::vector<S> c(static_cast<size_t>(degree) + 1, S{});
        c.back() = std::move(lead);
        return Poly(std::move(c));
    }

    const std::vector<S>& coeffs() const { return c_; }
    bool is_zero_poly() const { return c_.empty(); }

    // Coefficient of z^i; zero outside storage.
    S coeff(int i) const {
        if (i < 0 || static_cast<size_t>(i) >= c_.size()) return S{};
        return c_[static_cast<size_t>(i)];
    }

    // Degree with the backend zero test; -1 stands in for -infinity.
    int degree(const TolerancePolicy& pol = {}) const {
        for (int i = static_cast<int>(c_.size()) - 1; i >= 0; --i)
            if (!is_zero(c_[static_cast<size_t>(i)], pol)) return i;
        return -1;
    }

    S operator()(const S& z) const {  // Horner
        S acc{};
        for (size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
        return acc;
    }

    Poly operator-() const {
        std::vector<S> c(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
        return Poly(std::move(c));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<S> c(std::max(a.c_.size(), b.c_.size()), S{});
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] = c[i] + a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const S& s, const Poly& p) {
        std::vector<S> c(p.c_.size());
        for (size_t i = 0; i < p.c_.size(); ++i) c[i] = s * p.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c_.empty() || b.c_.empty()) return Poly();
        std::vector<S> c(a.c_.size() + b.c_.size() - 1, S{});
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }

    bool operator==(const Poly&) const = default;

    // z^k * p.
    Poly shifted(int k) const {
        if (c_.empty()) return Poly();
        std::vector<S> c(c_.size() + static_cast<size_t>(k), S{});
        for (size_t i = 0; i < c_.size(); ++i) c[i + static_cast<size_t>(k)] = c_[i];
        return Poly(std::move(c));
    }

    Poly conj_coeffs() const {
        std::vector<S> c(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) c[i] = conj(c_[i]);
        return Poly(std::move(c));
    }

    // z^n conj(p(1/conj(z))) for the declared length n: coefficient i of the
    // result is conj(coeff(n - i)).
    Poly reversed(int n) const {
        std::vector<S> c(static_cast<size_t>(n) + 1, S{});
        for (int i = 0; i <= n; ++i) c[static_cast<size_t>(i)] = conj(coeff(n - i));
        return Poly(std::move(c));
    }

    // Max |coefficient|; exactly-zero polynomials report 0.
    double max_abs_coeff() const {
        double m = 0.0;
        for (const S& v : c_) m = std::max(m, abs_approx(v));
        return m;
    }

    bool exactly_zero() const { return c_.empty(); }

private:
    void trim() {
        while (!c_.empty() && c_.back() == S{}) c_.pop_back();
    }

    std::vector<S> c_;
};

// r-tuple of polynomials with per-slot degree caps deg Q_j <= n_j - 1.
// Slot j is the zero polynomial whenever n_j = 0.
template <ScalarField S>
class PolyVector {
public:
    PolyVector() = default;
    explicit PolyVector(std::vector<Poly<S>> slots) : slots_(std::move(slots)) {}
    static PolyVector zero(int r) { return PolyVector(std::vector<Poly<S>>(static_cast<size_t>(r))); }

    int size() const { return static_cast<int>(slots_.size()); }
    const Poly<S>& slot(int j) const { return slots_.at(static_cast<size_t>(j - 1)); }  // 1-based
    Poly<S>& slot(int j) { return slots_.at(static_cast<size_t>(j - 1)); }
    const std::vector<Poly<S>>& slots() const { return slots_; }

    friend PolyVector operator+(const PolyVector& a, const PolyVector& b) {
        check_dims(a, b);
        std::vector<Poly<S>> s(a.slots_.size());
        for (size_t i = 0; i < s.size(); ++i) s[i] = a.slots_[i] + b.slots_[i];
        return PolyVector(std::move(s));
    }
    friend PolyVector operator-(const PolyVector& a, const PolyVector& b) {
        check_dims(a, b);
        std::vector<Poly<S>> s(a.slots_.size());
        for (size_t i = 0; i < s.size(); ++i) s[i] = a.slots_[i] - b.slots_[i];
        return PolyVector(std::move(s));
    }
    friend PolyVector operator*(const S& c, const PolyVector& v) {
        std::vector<Poly<S>> s(v.slots_.size());
        for (size_t i = 0; i < s.size(); ++i) s[i] = c * v.slots_[i];
        return PolyVector(std::move(s));
    }

    PolyVector shifted(int k) const {  // z^k applied slot-wise
        std::vector<Poly<S>> s(slots_.size());
        for (size_t i = 0; i < s.size(); ++i) s[i] = slots_[i].shifted(k);
        return PolyVector(std::move(s));
    }

    bool operator==(const PolyVector&) const = default;

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& p : slots_) m = std::max(m, p.max_abs_coeff());
        return m;
    }
    bool exactly_zero() const {
        for (const auto& p : slots_)
            if (!p.exactly_zero()) return false;
        return true;
    }

private:
    static void check_dims(const PolyVector& a, const PolyVector& b) {
        if (a.slots_.size() != b.slots_.size())
            throw std::invalid_argument("PolyVector: slot count mismatch");
    }

    std::vector<Poly<S>> slots_;
};

}  // namespace mopuc
