#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mopuc/lattice.hpp"
#include "mopuc/multi_index.hpp"
#include "mopuc/poly.hpp"
#include "mopuc/recurrence.hpp"
#include "mopuc/rng.hpp"
#include "mopuc/scalar.hpp"

namespace mopuc {

// Monotone lattice path n_0 = 0, n_{t+1} = n_t + e_{steps[t]}; |n_t| = t.
struct LatticePath {
    int r = 0;
    std::vector<int> steps;        // values in 1..r
    std::vector<MultiIndex> nodes;  // length steps.size() + 1

    int length() const { return static_cast<int>(steps.size()); }
    const MultiIndex& endpoint() const { return nodes.back(); }
};

inline LatticePath make_path_explicit(int r, std::vector<int> steps) {
    LatticePath p;
    p.r = r;
    p.nodes.push_back(MultiIndex::zero(r));
    for (size_t t = 0; t < steps.size(); ++t) {
        if (steps[t] < 1 || steps[t] > r)
            throw std::invalid_argument("path step " + std::to_string(t) + " = " +
                                        std::to_string(steps[t]) + " outside 1.." + std::to_string(r));
        p.nodes.push_back(p.nodes.back().plus(steps[t]));
    }
    p.steps = std::move(steps);
    return p;
}

// All e_1 steps first, then e_2, ... up to the target index.
inline LatticePath make_path_stepline(const MultiIndex& target) {
    std::vector<int> steps;
    for (int j = 1; j <= target.dim(); ++j)
        for (int q = 0; q < target[j]; ++q) steps.push_back(j);
    return make_path_explicit(target.dim(), std::move(steps));
}

inline LatticePath make_path_round_robin(int r, int length) {
    std::vector<int> steps;
    for (int t = 0; t < length; ++t) steps.push_back(t % r + 1);
    return make_path_explicit(r, std::move(steps));
}

inline LatticePath make_path_random(int r, int length, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<int> steps;
    for (int t = 0; t < length; ++t) steps.push_back(static_cast<int>(rng.below(static_cast<uint64_t>(r))) + 1);
    return make_path_explicit(r, std::move(steps));
}

// sum_m conj(Lambda_m(zeta)), i.e. each slot's conjugated coefficients
// evaluated at conj(zeta).
template <ScalarField S>
S conj_bracket(const PolyVector<S>& lam, const S& zeta) {
    S acc{};
    const S zbar = conj(zeta);
    for (int m = 1; m <= lam.size(); ++m) acc = acc + lam.slot(m).conj_coeffs()(zbar);
    return acc;
}

template <ScalarField S>
struct CDEvaluation {
    LatticePath path;
    S z{}, zeta{};
    S lhs{}, rhs{};
    double residual = 0.0;
    bool exact_zero = false;
    bool pass = false;
};

namespace detail {

// The CD theorem needs every path node normal along with every lattice
// neighbour of every node. First violation is reported, nothing is patched.
template <ScalarField S>
void require_path_normal(const Lattice<S>& lat, const LatticePath& path) {
    for (const auto& node : path.nodes) {
        lat.require_normal(node);
        for (int j = 1; j <= lat.r(); ++j) {
            lat.require_normal(node.plus(j));
            if (node[j] > 0) lat.require_normal(node.minus(j));
        }
    }
}

}  // namespace detail

// Evaluates both sides of the Christoffel-Darboux identity at (z, zeta):
// the left side sums Phi_{n_t}(z) conj(Lambda_{n_{t+1}}(zeta)) along the
// path, the right side uses endpoint data only.
template <ScalarField S>
CDEvaluation<S> cd_check(const Lattice<S>& lat, const LatticePath& path, const S& z, const S& zeta) {
    if (path.r != lat.r()) throw std::invalid_argument("cd_check: path dimension != system size");
    if (path.length() < 1) throw std::invalid_argument("cd_check: empty path");
    detail::require_path_normal(lat, path);

    CDEvaluation<S> ev;
    ev.path = path;
    ev.z = z;
    ev.zeta = zeta;

    const S one = scalar_from_int<S>(1);
    S kernel{};
    for (int t = 0; t < path.length(); ++t) {
        const S phi_val = lat.type2(path.nodes[static_cast<size_t>(t)])(z);
        kernel = kernel + phi_val * conj_bracket(lat.type1(path.nodes[static_cast<size_t>(t) + 1]), zeta);
    }
    ev.lhs = (one - z * conj(zeta)) * kernel;

    const MultiIndex& end = path.endpoint();
    S rhs = lat.type2star(end)(z) * conj_bracket(lat.type1star(end), zeta);
    for (int j : end.support()) {
        const S rho = rho_value(lat, end, j);
        const Poly<S> zphi = lat.type2(end.minus(j)).shifted(1);
        rhs = rhs - rho * zphi(z) * conj_bracket(lat.type1(end.plus(j)), zeta);
    }
    ev.rhs = rhs;

    const S defect = ev.lhs - ev.rhs;
    ev.residual = abs_approx(defect);
    ev.exact_zero = (defect == S{});
    ev.pass = kExactScalar<S> ? ev.exact_zero : ev.residual <= lat.policy().residual_tol;
    return ev;
}

// Polynomial in z and w, where w stands for conj(zeta). Coefficients are
// stored dense, c[i][j] multiplying z^i w^j.
template <ScalarField S>
class BivariatePoly {
public:
    BivariatePoly() = default;
    BivariatePoly(int deg_z, int deg_w)
        : nz_(deg_z + 1), nw_(deg_w + 1), c_(static_cast<size_t>(nz_) * nw_, S{}) {}

    // f(z) * g(w)
    static BivariatePoly outer(const Poly<S>& f, const Poly<S>& g) {
        int dz = std::max<int>(0, static_cast<int>(f.coeffs().size()) - 1);
        int dw = std::max<int>(0, static_cast<int>(g.coeffs().size()) - 1);
        BivariatePoly b(dz, dw);
        for (size_t i = 0; i < f.coeffs().size(); ++i)
            for (size_t j = 0; j < g.coeffs().size(); ++j)
                b.at(static_cast<int>(i), static_cast<int>(j)) = f.coeffs()[i] * g.coeffs()[j];
        return b;
    }

    S coeff(int i, int j) const {
        if (i < 0 || j < 0 || i >= nz_ || j >= nw_) return S{};
        return c_[static_cast<size_t>(i) * nw_ + static_cast<size_t>(j)];
    }

    friend BivariatePoly operator+(const BivariatePoly& a, const BivariatePoly& b) {
        BivariatePoly out(std::max(a.nz_, b.nz_) - 1, std::max(a.nw_, b.nw_) - 1);
        for (int i = 0; i < out.nz_; ++i)
            for (int j = 0; j < out.nw_; ++j) out.at(i, j) = a.coeff(i, j) + b.coeff(i, j);
        return out;
    }
    friend BivariatePoly operator-(const BivariatePoly& a, const BivariatePoly& b) {
        return a + (scalar_from_int<S>(-1) * b);
    }
    friend BivariatePoly operator*(const S& s, const BivariatePoly& b) {
        BivariatePoly out = b;
        for (auto& v : out.c_) v = s * v;
        return out;
    }

    // (1 - z w) * this
    BivariatePoly times_one_minus_zw() const {
        BivariatePoly out(nz_, nw_);
        for (int i = 0; i < nz_; ++i)
            for (int j = 0; j < nw_; ++j) {
                out.at(i, j) = out.at(i, j) + coeff(i, j);
                out.at(i + 1, j + 1) = out.at(i + 1, j + 1) - coeff(i, j);
            }
        return out;
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& v : c_) m = std::max(m, abs_approx(v));
        return m;
    }
    bool exactly_zero() const {
        for (const auto& v : c_)
            if (!(v == S{})) return false;
        return true;
    }
    int degree_z(const TolerancePolicy& pol = {}) const {
        int d = -1;
        for (int i = 0; i < nz_; ++i)
            for (int j = 0; j < nw_; ++j)
                if (!is_zero(coeff(i, j), pol)) d = std::max(d, i);
        return d;
    }
    int degree_w(const TolerancePolicy& pol = {}) const {
        int d = -1;
        for (int i = 0; i < nz_; ++i)
            for (int j = 0; j < nw_; ++j)
                if (!is_zero(coeff(i, j), pol)) d = std::max(d, j);
        return d;
    }

    S& at(int i, int j) { return c_[static_cast<size_t>(i) * nw_ + static_cast<size_t>(j)]; }

private:
    int nz_ = 1, nw_ = 1;
    std::vector<S> c_{S{}};
};

template <ScalarField S>
struct CDSymbolic {
    LatticePath path;
    BivariatePoly<S> lhs, rhs;
    double residual = 0.0;
    bool exact_zero = false;
    bool pass = false;
};

// Coefficient-level version of cd_check: expands both sides as polynomials
// in (z, w = conj(zeta)) and compares arrays. Point checks catch gross
// errors cheaply; this one proves the identity on the exact backend.
template <ScalarField S>
CDSymbolic<S> cd_check_symbolic(const Lattice<S>& lat, const LatticePath& path) {
    if (path.r != lat.r()) throw std::invalid_argument("cd_check_symbolic: path dimension != system size");
    if (path.length() < 1) throw std::invalid_argument("cd_check_symbolic: empty path");
    detail::require_path_normal(lat, path);

    auto conj_sum = [&](const PolyVector<S>& lam) {  // sum_m conj-coeffs as a poly in w
        Poly<S> acc;
        for (int m = 1; m <= lam.size(); ++m) acc = acc + lam.slot(m).conj_coeffs();
        return acc;
    };

    CDSymbolic<S> res;
    res.path = path;

    BivariatePoly<S> kernel;
    for (int t = 0; t < path.length(); ++t) {
        kernel = kernel + BivariatePoly<S>::outer(lat.type2(path.nodes[static_cast<size_t>(t)]),
                                                  conj_sum(lat.type1(path.nodes[static_cast<size_t>(t) + 1])));
    }
    res.lhs = kernel.times_one_minus_zw();

    const MultiIndex& end = path.endpoint();
    BivariatePoly<S> rhs = BivariatePoly<S>::outer(lat.type2star(end), conj_sum(lat.type1star(end)));
    for (int j : end.support()) {
        const S rho = rho_value(lat, end, j);
        rhs = rhs - rho * BivariatePoly<S>::outer(lat.type2(end.minus(j)).shifted(1),
                                                  conj_sum(lat.type1(end.plus(j))));
    }
    res.rhs = rhs;

    BivariatePoly<S> defect = res.lhs - res.rhs;
    res.residual = defect.max_abs_coeff();
    res.exact_zero = defect.exactly_zero();
    res.pass = kExactScalar<S> ? res.exact_zero : res.residual <= lat.policy().residual_tol;
    return res;
}

// Pseudo-random evaluation points with |Re|, |Im| <= 1 (so |z| <= sqrt 2).
// Exact backend draws small rationals, float backend the matching doubles.
template <ScalarField S>
std::vector<std::pair<S, S>> sample_cd_points(int count, uint64_t seed) {
    SplitMix64 rng(seed);
    auto draw = [&]() -> S {
        long den = rng.range(1, 6);
        long re_num = rng.range(-den, den);
        long im_num = rng.range(-den, den);
        if constexpr (kExactScalar<S>) {
            return GaussianRational::from_ratio(re_num, den, im_num, den);
        } else {
            return S(static_cast<double>(re_num) / den, static_cast<double>(im_num) / den);
        }
    };
    std::vector<std::pair<S, S>> pts;
    pts.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        S z = draw();
        S zeta = draw();
        pts.emplace_back(std::move(z), std::move(zeta));
    }
    return pts;
}

// count distinct exact unit-circle points via the rational parametrization
// z = ((1 - t^2) + 2 t i) / (1 + t^2); |z| = 1 holds identically.
template <ScalarField S>
std::vector<S> unit_circle_points(int count) {
    std::vector<S> pts;
    // t runs over distinct small rationals (0, 1, -1, 2, -2, 1/2, ...).
    std::vector<std::pair<long, long>> ts{{0, 1}};
    for (long den = 1; static_cast<int>(ts.size()) < count + 8; ++den)
        for (long num = 1; num <= 4 * den && static_cast<int>(ts.size()) < count + 8; ++num) {
            if (std::gcd(num, den) != 1) continue;
            ts.emplace_back(num, den);
            ts.emplace_back(-num, den);
        }
    for (int i = 0; i < count; ++i) {
        auto [p, q] = ts[static_cast<size_t>(i)];
        if constexpr (kExactScalar<S>) {
            mpq_class t(p, q);
            t.canonicalize();
            mpq_class den = 1 + t * t;
            pts.push_back(S{mpq_class((1 - t * t) / den), mpq_class(2 * t / den)});
        } else {
            double t = static_cast<double>(p) / static_cast<double>(q);
            double den = 1.0 + t * t;
            pts.push_back(S{(1.0 - t * t) / den, 2.0 * t / den});
        }
    }
    return pts;
}

}  // namespace mopuc
