#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mopuc/poly.hpp"
#include "mopuc/scalar.hpp"

namespace mopuc {

struct SingularMinorError : std::runtime_error {
    explicit SingularMinorError(int size)
        : std::runtime_error("singular leading principal minor at size " + std::to_string(size)), minor_size(size) {}
    int minor_size;
};

// Classical one-measure recursion data in the convention
// Phi_{m+1} = z Phi_m + alpha_{m+1} Phi*_m, alpha_m = Phi_m(0) (so alpha[0] = 1).
template <ScalarField S>
struct SzegoOracleResult {
    std::vector<Poly<S>> phi;      // m = 0..N
    std::vector<Poly<S>> phistar;  // reversed polynomials, m = 0..N
    std::vector<S> alpha;          // alpha[m] = Phi_m(0), m = 0..N
};

// Cross-check oracle: runs the classical recursion straight from raw
// moments, with its own little coefficient arithmetic. Deliberately shares
// no solver path with the moment-matrix route it is used to audit.
template <ScalarField S>
SzegoOracleResult<S> szego_oracle(const std::function<S(long)>& moment, int degree,
                                  const TolerancePolicy& pol = {}) {
    using Vec = std::vector<S>;
    auto ip = [&](const Vec& f, const Vec& g) {  // <f, g> from raw moments
        S acc{};
        for (size_t a = 0; a < f.size(); ++a)
            for (size_t b = 0; b < g.size(); ++b)
                acc = acc + f[a] * conj(g[b]) * moment(static_cast<long>(a) - static_cast<long>(b));
        return acc;
    };
    auto shift = [](const Vec& f) {
        Vec out(f.size() + 1, S{});
        for (size_t i = 0; i < f.size(); ++i) out[i + 1] = f[i];
        return out;
    };
    auto axpy = [](const Vec& f, const S& c, const Vec& g) {  // f + c*g
        Vec out(std::max(f.size(), g.size()), S{});
        for (size_t i = 0; i < f.size(); ++i) out[i] = f[i];
        for (size_t i = 0; i < g.size(); ++i) out[i] = out[i] + c * g[i];
        return out;
    };

    SzegoOracleResult<S> res;
    Vec phi{scalar_from_int<S>(1)};
    Vec phistar{scalar_from_int<S>(1)};
    res.phi.emplace_back(phi);
    res.phistar.emplace_back(phistar);
    res.alpha.push_back(scalar_from_int<S>(1));

    for (int m = 0; m < degree; ++m) {
        Vec zphi = shift(phi);
        S den = ip(phistar, phistar);
        if (is_zero(den, pol)) throw SingularMinorError(m + 1);
        S alpha_next = -(ip(zphi, phistar) / den);
        Vec phi_next = axpy(zphi, alpha_next, phistar);
        Vec phistar_next = axpy(phistar, conj(alpha_next), zphi);
        phi = std::move(phi_next);
        phistar = std::move(phistar_next);
        res.phi.emplace_back(phi);
        res.phistar.emplace_back(phistar);
        res.alpha.push_back(alpha_next);
    }
    return res;
}

}  // namespace mopuc
