#pragma once

#include <cmath>
#include <cstdio>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace mopuc {

// Thresholds used by the floating-point backend. The exact backend ignores
// every field: its zero tests and residuals are literal comparisons.
struct TolerancePolicy {
    double zero_eps = 1e-12;   // absolute "is zero" threshold for scalars
    double residual_tol = 1e-9;  // identity-check threshold
    double rcond_min = 1e-10;  // reciprocal-condition floor for normality

    void validate() const {
        if (!(zero_eps > 0.0) || !(residual_tol > 0.0) || !(rcond_min > 0.0))
            throw std::invalid_argument("TolerancePolicy: thresholds must be strictly positive");
    }
};

// Hadamard-normalized |det| below this is reported "indeterminate": the
// boolean normal/non-normal classification on floats is unreliable there.
inline constexpr double kIndeterminateDetEps = 1e-8;

using ComplexF = std::complex<double>;

// Complex number with exact rational real and imaginary parts. Closed under
// field operations, so every solve and residual in the exact backend is
// bit-exact. Backed by GMP rationals; no fixed-width overflow is possible.
class GaussianRational {
public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit GaussianRational(mpq_class re) : re_(std::move(re)), im_(0) {}
    explicit GaussianRational(long v) : re_(v), im_(0) {}

    static GaussianRational from_ratio(long p, long q, long ip = 0, long iq = 1) {
        if (q == 0 || iq == 0) throw std::invalid_argument("GaussianRational: zero denominator");
        mpq_class re(p, q), im(ip, iq);
        re.canonicalize();
        im.canonicalize();
        return {re, im};
    }

    const mpq_class& real() const { return re_; }
    const mpq_class& imag() const { return im_; }

    bool operator==(const GaussianRational& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        mpq_class re = re_ * o.re_ - im_ * o.im_;
        mpq_class im = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        mpq_class d = o.re_ * o.re_ + o.im_ * o.im_;
        if (d == 0) throw std::domain_error("GaussianRational: division by zero");
        mpq_class re = (re_ * o.re_ + im_ * o.im_) / d;
        mpq_class im = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    // |x|^2 as an exact rational.
    mpq_class abs2() const { return re_ * re_ + im_ * im_; }

private:
    mpq_class re_, im_;
};

inline GaussianRational conj(const GaussianRational& z) { return {z.real(), -z.imag()}; }
inline ComplexF conj(const ComplexF& z) { return std::conj(z); }

inline ComplexF to_complexf(const GaussianRational& z) {
    return {z.real().get_d(), z.imag().get_d()};
}
inline ComplexF to_complexf(const ComplexF& z) { return z; }

inline double abs_approx(const GaussianRational& z) { return std::abs(to_complexf(z)); }
inline double abs_approx(const ComplexF& z) { return std::abs(z); }

template <class S>
struct ScalarIsExact : std::false_type {};
template <>
struct ScalarIsExact<GaussianRational> : std::true_type {};
template <class S>
inline constexpr bool kExactScalar = ScalarIsExact<S>::value;

// Exact backend: true iff x = 0. Float backend: true iff |x| <= zero_eps.
inline bool is_zero(const GaussianRational& x, const TolerancePolicy&) {
    return x.real() == 0 && x.imag() == 0;
}
inline bool is_zero(const ComplexF& x, const TolerancePolicy& pol) {
    return std::abs(x) <= pol.zero_eps;
}

template <class S>
S scalar_from_int(long v);
template <>
inline GaussianRational scalar_from_int<GaussianRational>(long v) { return GaussianRational(v); }
template <>
inline ComplexF scalar_from_int<ComplexF>(long v) { return {static_cast<double>(v), 0.0}; }

template <class S>
S scalar_from_ratio(long p, long q);
template <>
inline GaussianRational scalar_from_ratio<GaussianRational>(long p, long q) {
    return GaussianRational::from_ratio(p, q);
}
template <>
inline ComplexF scalar_from_ratio<ComplexF>(long p, long q) {
    return {static_cast<double>(p) / static_cast<double>(q), 0.0};
}

template <typename S>
concept ScalarField = std::regular<S> && requires(const S& a, const S& b, const TolerancePolicy& pol) {
    { a + b } -> std::convertible_to<S>;
    { a - b } -> std::convertible_to<S>;
    { a * b } -> std::convertible_to<S>;
    { a / b } -> std::convertible_to<S>;
    { -a } -> std::convertible_to<S>;
    { conj(a) } -> std::convertible_to<S>;
    { is_zero(a, pol) } -> std::same_as<bool>;
    { abs_approx(a) } -> std::same_as<double>;
    { to_complexf(a) } -> std::same_as<ComplexF>;
};

// Canonical rational string: "p" when the denominator is 1, else "p/q".
inline std::string rational_str(const mpq_class& q) { return q.get_str(); }

namespace detail {

inline std::string float_str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// "p/q+p'/q'i" cell form, lossless for the exact backend.
inline std::string scalar_str(const GaussianRational& z) {
    std::string im = rational_str(z.imag());
    std::string sep = (!im.empty() && im[0] == '-') ? "" : "+";
    return rational_str(z.real()) + sep + im + "i";
}
inline std::string scalar_str(const ComplexF& z) {
    std::string im = detail::float_str(z.imag());
    std::string sep = (!im.empty() && im[0] == '-') ? "" : "+";
    return detail::float_str(z.real()) + sep + im + "i";
}

}  // namespace mopuc
