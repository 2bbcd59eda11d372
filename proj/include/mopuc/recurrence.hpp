#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mopuc/lattice.hpp"
#include "mopuc/multi_index.hpp"
#include "mopuc/poly.hpp"
#include "mopuc/scalar.hpp"

namespace mopuc {

// Recurrence data of one index. alpha is the constant term of Phi_n, beta
// the z^{|n|}-coefficient of Phi*_n, rho_k the weight of z Phi_{n-e_k} in
// the type II recurrence (0 whenever n_k = 0), kappa_k the z^{n_k-1}
// coefficient of the type I slot k (0 whenever n_k = 0).
template <ScalarField S>
struct CoeffRecord {
    MultiIndex index;
    S alpha{};
    S beta{};
    std::vector<S> rho;
    std::vector<S> kappa;
    bool normal = true;
};

enum class CheckStatus { ok, precondition_failed, not_applicable };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::ok: return "ok";
        case CheckStatus::precondition_failed: return "precondition-failed";
        case CheckStatus::not_applicable: return "not-applicable";
    }
    return "?";
}

// Outcome of one identity check at one index. residual is the max absolute
// coefficient of the defect (a double approximation on the exact backend;
// exact_zero records literal vanishing there). pass is residual == 0 on the
// exact backend and residual <= residual_tol on floats.
struct IdentityReport {
    std::string identity;
    MultiIndex index;
    int k = 0;  // 1-based when used, 0 otherwise
    int l = 0;
    CheckStatus status = CheckStatus::ok;
    double residual = 0.0;
    bool exact_zero = false;
    bool pass = false;
    std::vector<MultiIndex> required_normal;
    std::string note;
};

namespace detail {

inline IdentityReport make_report(std::string name, const MultiIndex& n, int k = 0, int l = 0) {
    IdentityReport rep;
    rep.identity = std::move(name);
    rep.index = n;
    rep.k = k;
    rep.l = l;
    return rep;
}

template <ScalarField S>
void set_result(IdentityReport& rep, double approx, bool exact_zero, const TolerancePolicy& pol) {
    rep.status = CheckStatus::ok;
    rep.residual = approx;
    rep.exact_zero = exact_zero;
    if constexpr (kExactScalar<S>)
        rep.pass = exact_zero;
    else
        rep.pass = approx <= pol.residual_tol;
}

template <ScalarField S>
void set_poly_result(IdentityReport& rep, const Poly<S>& defect, const TolerancePolicy& pol) {
    set_result<S>(rep, defect.max_abs_coeff(), defect.exactly_zero(), pol);
}

template <ScalarField S>
void set_vector_result(IdentityReport& rep, const PolyVector<S>& defect, const TolerancePolicy& pol) {
    set_result<S>(rep, defect.max_abs_coeff(), defect.exactly_zero(), pol);
}

template <ScalarField S>
void set_scalar_result(IdentityReport& rep, const S& defect, const TolerancePolicy& pol) {
    set_result<S>(rep, abs_approx(defect), defect == S{}, pol);
}

// Normality gate shared by every verification: on failure the report is
// stamped precondition-failed with the first offending index, never a
// silent pass or fail.
template <ScalarField S>
bool preconditions_ok(const Lattice<S>& lat, IdentityReport& rep, std::vector<MultiIndex> required) {
    std::sort(required.begin(), required.end());
    required.erase(std::unique(required.begin(), required.end()), required.end());
    rep.required_normal = required;
    for (const auto& m : required) {
        if (!lat.is_normal(m).normal) {
            rep.status = CheckStatus::precondition_failed;
            rep.pass = false;
            rep.note = "index " + m.str() + " is not normal";
            return false;
        }
    }
    return true;
}

inline void set_not_applicable(IdentityReport& rep, std::string why) {
    rep.status = CheckStatus::not_applicable;
    rep.pass = false;
    rep.note = std::move(why);
}

}  // namespace detail

// rho_{n,k} from the inner-product quotient
// <Phi_n, z^{n_k}>_k / <Phi_{n-e_k}, z^{n_k-1}>_k; the denominator is
// nonzero whenever n is normal (given n-e_k normal).
template <ScalarField S>
S rho_value(const Lattice<S>& lat, const MultiIndex& n, int k) {
    if (n[k] == 0) return S{};
    const Poly<S> zp = Poly<S>::monomial(n[k]);
    const Poly<S> zp1 = Poly<S>::monomial(n[k] - 1);
    S num = lat.inner(k, lat.type2(n), zp);
    S den = lat.inner(k, lat.type2(n.minus(k)), zp1);
    if (den == S{}) throw std::domain_error("rho: vanishing bracket at " + n.minus(k).str());
    return num / den;
}

// Full coefficient bundle at n. Requires n and every n-e_k with n_k > 0 to
// be normal; throws NotNormalError otherwise.
template <ScalarField S>
CoeffRecord<S> coeffs(const Lattice<S>& lat, const MultiIndex& n) {
    lat.require_normal(n);
    for (int k : n.support()) lat.require_normal(n.minus(k));

    CoeffRecord<S> rec;
    rec.index = n;
    rec.alpha = lat.type2(n).coeff(0);
    rec.beta = lat.type2star(n).coeff(n.norm());
    rec.rho.assign(static_cast<size_t>(lat.r()), S{});
    rec.kappa.assign(static_cast<size_t>(lat.r()), S{});
    for (int k : n.support()) rec.rho[static_cast<size_t>(k - 1)] = rho_value(lat, n, k);
    if (!n.is_zero()) {
        const PolyVector<S>& lam = lat.type1(n);
        for (int k : n.support()) rec.kappa[static_cast<size_t>(k - 1)] = lam.slot(k).coeff(n[k] - 1);
    }
    return rec;
}

// gamma_n^{kl}: the z^{|n|}-coefficient of Phi_{n+e_k} - Phi_{n+e_l}. Always
// well defined when n, n+e_k, n+e_l are normal, even where alpha_n = 0.
template <ScalarField S>
S gamma(const Lattice<S>& lat, const MultiIndex& n, int k, int l) {
    if (k == l) throw std::invalid_argument("gamma: requires k != l");
    lat.require_normal(n);
    lat.require_normal(n.plus(k));
    lat.require_normal(n.plus(l));
    Poly<S> diff = lat.type2(n.plus(k)) - lat.type2(n.plus(l));
    return diff.coeff(n.norm());
}

// Phi_n = alpha_n Phi*_n + sum_j rho_{n,j} z Phi_{n-e_j}.
template <ScalarField S>
std::vector<IdentityReport> verify_type2(const Lattice<S>& lat, const MultiIndex& n) {
    IdentityReport rep = detail::make_report("phi-recurrence", n);
    std::vector<MultiIndex> req{n};
    for (int j : n.support()) req.push_back(n.minus(j));
    if (!detail::preconditions_ok(lat, rep, req)) return {rep};

    CoeffRecord<S> rec = coeffs(lat, n);
    Poly<S> rhs = rec.alpha * lat.type2star(n);
    for (int j : n.support()) rhs = rhs + rec.rho[static_cast<size_t>(j - 1)] * lat.type2(n.minus(j)).shifted(1);
    detail::set_poly_result<S>(rep, lat.type2(n) - rhs, lat.policy());
    return {rep};
}

// Phi*_n = Phi*_{n-e_k} + beta_n z Phi_{n-e_k}, with the single beta_n read
// off the top of Phi*_n; running this over every k in the support is the
// k-independence check.
template <ScalarField S>
std::vector<IdentityReport> verify_type2star(const Lattice<S>& lat, const MultiIndex& n, int k) {
    if (n[k] == 0) throw std::invalid_argument("verify_type2star: n_k = 0");
    IdentityReport rep = detail::make_report("phistar-recurrence", n, k);
    if (!detail::preconditions_ok(lat, rep, {n, n.minus(k)})) return {rep};

    S beta = lat.type2star(n).coeff(n.norm());
    Poly<S> defect = lat.type2star(n) - lat.type2star(n.minus(k)) - beta * lat.type2(n.minus(k)).shifted(1);
    detail::set_poly_result<S>(rep, defect, lat.policy());
    return {rep};
}

// Phi*_n = beta_n Phi_n + sum_j rho_{n,j} Phi*_{n-e_j}, plus the scalar sum
// rule alpha_n beta_n + sum_j rho_{n,j} = 1 read off the leading coefficients.
template <ScalarField S>
std::vector<IdentityReport> verify_third(const Lattice<S>& lat, const MultiIndex& n) {
    IdentityReport poly_rep = detail::make_report("phistar-expansion", n);
    IdentityReport sum_rep = detail::make_report("rho-sum-rule", n);
    std::vector<MultiIndex> req{n};
    for (int j : n.support()) req.push_back(n.minus(j));
    if (!detail::preconditions_ok(lat, poly_rep, req)) {
        detail::preconditions_ok(lat, sum_rep, req);
        return {poly_rep, sum_rep};
    }
    detail::preconditions_ok(lat, sum_rep, req);

    CoeffRecord<S> rec = coeffs(lat, n);
    Poly<S> rhs = rec.beta * lat.type2(n);
    S rho_total{};
    for (int j : n.support()) {
        rhs = rhs + rec.rho[static_cast<size_t>(j - 1)] * lat.type2star(n.minus(j));
        rho_total = rho_total + rec.rho[static_cast<size_t>(j - 1)];
    }
    detail::set_poly_result<S>(poly_rep, lat.type2star(n) - rhs, lat.policy());
    detail::set_scalar_result<S>(sum_rep, rec.alpha * rec.beta + rho_total - scalar_from_int<S>(1), lat.policy());
    return {poly_rep, sum_rep};
}

// Stacked one-step transfer identities. With R_n the r x r matrix whose
// rows all equal (rho_{n,1},...,rho_{n,r}):
//   (i)  beta_n != 0:  (Phi_n - z Phi_{n-e_j})_j = (1/beta_n)(I-R_n) (Phi*_{n-e_j})_j
//   (ii) alpha_n != 0: (1/alpha_n)((1-sum rho)I + R_n)(Phi_n - z Phi_{n-e_j})_j = (Phi*_{n-e_j})_j
// plus det(I - R_n) = alpha_n beta_n. Rows only exist when every n-e_j lies
// in the lattice, so indices with a zero component are not applicable.
template <ScalarField S>
std::vector<IdentityReport> verify_A_matrix(const Lattice<S>& lat, const MultiIndex& n) {
    std::vector<IdentityReport> out;
    const int r = lat.r();
    bool interior = true;
    for (int j = 1; j <= r; ++j)
        if (n[j] == 0) interior = false;
    if (!interior) {
        IdentityReport rep = detail::make_report("transfer-matrix", n);
        detail::set_not_applicable(rep, "requires every n - e_j inside Z_+^r");
        return {rep};
    }
    IdentityReport gate = detail::make_report("transfer-matrix", n);
    std::vector<MultiIndex> req{n};
    for (int j = 1; j <= r; ++j) req.push_back(n.minus(j));
    if (!detail::preconditions_ok(lat, gate, req)) return {gate};

    CoeffRecord<S> rec = coeffs(lat, n);
    const TolerancePolicy& pol = lat.policy();

    std::vector<Poly<S>> lhs_rows;  // Phi_n - z Phi_{n-e_j}
    for (int j = 1; j <= r; ++j) lhs_rows.push_back(lat.type2(n) - lat.type2(n.minus(j)).shifted(1));

    S rho_total{};
    for (int j = 1; j <= r; ++j) rho_total = rho_total + rec.rho[static_cast<size_t>(j - 1)];

    if (!is_zero(rec.beta, pol)) {
        for (int j = 1; j <= r; ++j) {
            IdentityReport rep = detail::make_report("transfer-forward", n, j);
            rep.required_normal = gate.required_normal;
            Poly<S> rhs = lat.type2star(n.minus(j));
            for (int m = 1; m <= r; ++m) rhs = rhs - rec.rho[static_cast<size_t>(m - 1)] * lat.type2star(n.minus(m));
            S inv_beta = scalar_from_int<S>(1) / rec.beta;
            detail::set_poly_result<S>(rep, lhs_rows[static_cast<size_t>(j - 1)] - inv_beta * rhs, pol);
            out.push_back(std::move(rep));
        }
    } else {
        IdentityReport rep = detail::make_report("transfer-forward", n);
        detail::set_not_applicable(rep, "beta_n = 0");
        out.push_back(std::move(rep));
    }

    if (!is_zero(rec.alpha, pol)) {
        for (int j = 1; j <= r; ++j) {
            IdentityReport rep = detail::make_report("transfer-inverse", n, j);
            rep.required_normal = gate.required_normal;
            Poly<S> acc = (scalar_from_int<S>(1) - rho_total) * lhs_rows[static_cast<size_t>(j - 1)];
            for (int m = 1; m <= r; ++m)
                acc = acc + rec.rho[static_cast<size_t>(m - 1)] * lhs_rows[static_cast<size_t>(m - 1)];
            S inv_alpha = scalar_from_int<S>(1) / rec.alpha;
            detail::set_poly_result<S>(rep, inv_alpha * acc - lat.type2star(n.minus(j)), pol);
            out.push_back(std::move(rep));
        }
    } else {
        IdentityReport rep = detail::make_report("transfer-inverse", n);
        detail::set_not_applicable(rep, "alpha_n = 0");
        out.push_back(std::move(rep));
    }

    {
        IdentityReport rep = detail::make_report("transfer-det", n);
        rep.required_normal = gate.required_normal;
        Matrix<S> i_minus_r = Matrix<S>::identity(r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) i_minus_r.at(i, j) = i_minus_r.at(i, j) - rec.rho[static_cast<size_t>(j)];
        S det = bareiss_det(i_minus_r);
        detail::set_scalar_result<S>(rep, det - rec.alpha * rec.beta, pol);
        out.push_back(std::move(rep));
    }
    return out;
}

// Type I pair:
//   (i)  z Lambda_n = -conj(beta_n) Lambda*_n + sum_j conj(rho_{n,j}) Lambda_{n+e_j}
//   (ii) Lambda*_n = Lambda*_{n+e_k} - conj(alpha_n) Lambda_{n+e_k}   (one report per k)
template <ScalarField S>
std::vector<IdentityReport> verify_type1(const Lattice<S>& lat, const MultiIndex& n) {
    std::vector<IdentityReport> out;
    const int r = lat.r();
    const TolerancePolicy& pol = lat.policy();
    {
        IdentityReport rep = detail::make_report("lambda-recurrence", n);
        std::vector<MultiIndex> req{n};
        for (int j = 1; j <= r; ++j) {
            req.push_back(n.plus(j));
            if (n[j] > 0) req.push_back(n.minus(j));
        }
        if (detail::preconditions_ok(lat, rep, req)) {
            CoeffRecord<S> rec = coeffs(lat, n);
            PolyVector<S> rhs = (-conj(rec.beta)) * lat.type1star(n);
            for (int j = 1; j <= r; ++j)
                rhs = rhs + conj(rec.rho[static_cast<size_t>(j - 1)]) * lat.type1(n.plus(j));
            PolyVector<S> lhs = lat.lambda_or_zero(n).shifted(1);
            detail::set_vector_result<S>(rep, lhs - rhs, pol);
        }
        out.push_back(std::move(rep));
    }
    for (int k = 1; k <= r; ++k) {
        IdentityReport rep = detail::make_report("lambdastar-recurrence", n, k);
        if (detail::preconditions_ok(lat, rep, {n, n.plus(k)})) {
            S alpha = lat.type2(n).coeff(0);
            PolyVector<S> defect =
                lat.type1star(n) - lat.type1star(n.plus(k)) + conj(alpha) * lat.type1(n.plus(k));
            detail::set_vector_result<S>(rep, defect, pol);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

// Nearest-neighbour difference identities around n (k != l):
//   Phi_{n+e_k} - Phi_{n+e_l} = gamma_n^{kl} Phi_n
//   Phi*_{n+e_k} - Phi*_{n+e_l} = beta_{n+e_k+e_l} z (Phi_{n+e_l} - Phi_{n+e_k})
//   Phi*_{n+e_k} - Phi*_{n+e_l} = (beta_{n+e_k} - beta_{n+e_l}) z Phi_n
//   beta_{n+e_k}(Phi*_{n+e_l} - Phi*_n) = beta_{n+e_l}(Phi*_{n+e_k} - Phi*_n)
//   Lambda_{n+e_l} - Lambda_{n+e_k} = conj(gamma_n^{kl}) Lambda_{n+e_k+e_l}
template <ScalarField S>
std::vector<IdentityReport> verify_compat_polys(const Lattice<S>& lat, const MultiIndex& n, int k, int l) {
    if (k == l) throw std::invalid_argument("verify_compat_polys: requires k != l");
    std::vector<IdentityReport> out;
    const TolerancePolicy& pol = lat.policy();
    const MultiIndex nk = n.plus(k), nl = n.plus(l), nkl = n.plus(k).plus(l);

    {
        IdentityReport rep = detail::make_report("phi-difference", n, k, l);
        if (detail::preconditions_ok(lat, rep, {n, nk, nl})) {
            S g = gamma(lat, n, k, l);
            detail::set_poly_result<S>(rep, lat.type2(nk) - lat.type2(nl) - g * lat.type2(n), pol);
        }
        out.push_back(std::move(rep));
    }
    {
        IdentityReport rep = detail::make_report("phistar-difference-top", n, k, l);
        if (detail::preconditions_ok(lat, rep, {nk, nl, nkl})) {
            S beta_top = lat.type2star(nkl).coeff(nkl.norm());
            Poly<S> defect = lat.type2star(nk) - lat.type2star(nl) -
                             beta_top * (lat.type2(nl) - lat.type2(nk)).shifted(1);
            detail::set_poly_result<S>(rep, defect, pol);
        }
        out.push_back(std::move(rep));
    }
    {
        IdentityReport rep = detail::make_report("phistar-difference-base", n, k, l);
        if (detail::preconditions_ok(lat, rep, {n, nk, nl})) {
            S bk = lat.type2star(nk).coeff(nk.norm());
            S bl = lat.type2star(nl).coeff(nl.norm());
            Poly<S> defect = lat.type2star(nk) - lat.type2star(nl) - (bk - bl) * lat.type2(n).shifted(1);
            detail::set_poly_result<S>(rep, defect, pol);
        }
        out.push_back(std::move(rep));
    }
    {
        IdentityReport rep = detail::make_report("phistar-difference-cross", n, k, l);
        if (detail::preconditions_ok(lat, rep, {n, nk, nl})) {
            S bk = lat.type2star(nk).coeff(nk.norm());
            S bl = lat.type2star(nl).coeff(nl.norm());
            Poly<S> defect = bk * (lat.type2star(nl) - lat.type2star(n)) -
                             bl * (lat.type2star(nk) - lat.type2star(n));
            detail::set_poly_result<S>(rep, defect, pol);
        }
        out.push_back(std::move(rep));
    }
    {
        IdentityReport rep = detail::make_report("lambda-difference", n, k, l);
        if (detail::preconditions_ok(lat, rep, {n, nk, nl, nkl})) {
            S g = gamma(lat, n, k, l);
            PolyVector<S> defect = lat.type1(nl) - lat.type1(nk) - conj(g) * lat.type1(nkl);
            detail::set_vector_result<S>(rep, defect, pol);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

// Partial difference equations tying the coefficient fields together
// (ordered pair k != l; conditions 3.x are genuinely asymmetric in k, l):
//   1:   beta_n(alpha_{n-e_l} - alpha_{n-e_k}) = (beta_{n-e_k} - beta_{n-e_l}) alpha_{n-e_k-e_l}
//   2:   alpha_n beta_n + sum_j rho_{n,j} = 1
//   3.1: (alpha_{n-e_l}-alpha_{n-e_k}) alpha_{n-e_l} rho_{n,k}
//          = (alpha_{n+e_k-e_l}-alpha_n) alpha_{n-e_k-e_l} rho_{n-e_l,k}
//   3.2: rho_{n,k} gamma_{n-e_k-e_l}^{kl} = rho_{n-e_l,k} gamma_{n-e_l}^{kl}
//   3:   (beta_{n-e_k}-beta_{n-e_l}) beta_{n+e_k} rho_{n,k}
//          = (beta_n - beta_{n+e_k-e_l}) beta_n rho_{n-e_l,k}
template <ScalarField S>
std::vector<IdentityReport> verify_compat_coeffs(const Lattice<S>& lat, const MultiIndex& n, int k, int l) {
    if (k == l) throw std::invalid_argument("verify_compat_coeffs: requires k != l");
    std::vector<IdentityReport> out;
    const TolerancePolicy& pol = lat.policy();
    const bool interior = n[k] >= 1 && n[l] >= 1;

    auto alpha_at = [&](const MultiIndex& m) { return lat.type2(m).coeff(0); };
    auto beta_at = [&](const MultiIndex& m) { return lat.type2star(m).coeff(m.norm()); };

    {
        IdentityReport rep = detail::make_report("compat-alpha-beta", n, k, l);
        if (!interior) {
            detail::set_not_applicable(rep, "requires n_k >= 1 and n_l >= 1");
        } else if (detail::preconditions_ok(lat, rep, {n, n.minus(k), n.minus(l), n.minus(k).minus(l)})) {
            S defect = beta_at(n) * (alpha_at(n.minus(l)) - alpha_at(n.minus(k))) -
                       (beta_at(n.minus(k)) - beta_at(n.minus(l))) * alpha_at(n.minus(k).minus(l));
            detail::set_scalar_result<S>(rep, defect, pol);
        }
        out.push_back(std::move(rep));
    }
    {
        IdentityReport rep = detail::make_report("compat-sum-rule", n, k, l);
        std::vector<MultiIndex> req{n};
        for (int j : n.support()) req.push_back(n.minus(j));
        if (detail::preconditions_ok(lat, rep, req)) {
            CoeffRecord<S> rec = coeffs(lat, n);
            S total = rec.alpha * rec.beta;
            for (const S& rho : rec.rho) total = total + rho;
            detail::set_scalar_result<S>(rep, total - scalar_from_int<S>(1), pol);
        }
        out.push_back(std::move(rep));
    }

    if (!interior) {
        for (const char* name : {"compat-rho-alpha", "compat-rho-gamma", "compat-rho-beta"}) {
            IdentityReport rep = detail::make_report(name, n, k, l);
            detail::set_not_applicable(rep, "requires n_k >= 1 and n_l >= 1");
            out.push_back(std::move(rep));
        }
        return out;
    }

    const MultiIndex nmk = n.minus(k), nml = n.minus(l);
    const MultiIndex nmkl = n.minus(k).minus(l), npkml = n.plus(k).minus(l);

    {
        IdentityReport rep = detail::make_report("compat-rho-alpha", n, k, l);
        if (detail::preconditions_ok(lat, rep, {n, nmk, nml, nmkl, npkml})) {
            S lhs = (alpha_at(nml) - alpha_at(nmk)) * alpha_at(nml) * rho_value(lat, n, k);
            S rhs = (alpha_at(npkml) - alpha_at(n)) * alpha_at(nmkl) * rho_value(lat, nml, k);
            detail::set_scalar_result<S>(rep, lhs - rhs, pol);
        }
        out.push_back(std::move(rep));
    }
    {
        IdentityReport rep = detail::make_report("compat-rho-gamma", n, k, l);
        if (detail::preconditions_ok(lat, rep, {n, nmk, nml, nmkl, npkml})) {
            S lhs = rho_value(lat, n, k) * gamma(lat, nmkl, k, l);
            S rhs = rho_value(lat, nml, k) * gamma(lat, nml, k, l);
            detail::set_scalar_result<S>(rep, lhs - rhs, pol);
        }
        out.push_back(std::move(rep));
    }
    {
        IdentityReport rep = detail::make_report("compat-rho-beta", n, k, l);
        if (detail::preconditions_ok(lat, rep, {n, nmk, nml, nmkl, n.plus(k), npkml})) {
            S lhs = (beta_at(nmk) - beta_at(nml)) * beta_at(n.plus(k)) * rho_value(lat, n, k);
            S rhs = (beta_at(n) - beta_at(npkml)) * beta_at(n) * rho_value(lat, nml, k);
            detail::set_scalar_result<S>(rep, lhs - rhs, pol);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace mopuc
