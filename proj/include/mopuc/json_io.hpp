#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "mopuc/cd.hpp"
#include "mopuc/lattice.hpp"
#include "mopuc/measures.hpp"
#include "mopuc/multi_index.hpp"
#include "mopuc/poly.hpp"
#include "mopuc/recurrence.hpp"
#include "mopuc/scalar.hpp"

namespace mopuc {

// Ordered keys keep output byte-stable for fixed inputs and seed.
using Json = nlohmann::ordered_json;

namespace detail {

// "p/q", "p", or a decimal string like "-0.25", to an exact rational.
inline mpq_class rational_from_string(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        size_t frac_len = text.size() - dot - 1;
        mpz_class num(digits, 10);
        mpz_class den(1);
        for (size_t i = 0; i < frac_len; ++i) den *= 10;
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational literal: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
}

template <ScalarField S>
auto real_part_from_json(const Json& j) {
    if constexpr (kExactScalar<S>) {
        if (j.is_string()) return rational_from_string(j.get<std::string>());
        if (j.is_number_integer()) return mpq_class(j.get<long>());
        if (j.is_number_float()) {
            mpq_class q;
            mpq_set_d(q.get_mpq_t(), j.get<double>());  // exact binary expansion
            return q;
        }
        throw std::invalid_argument("scalar component must be a number or string");
    } else {
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            auto slash = s.find('/');
            if (slash != std::string::npos)
                return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
            return std::stod(s);
        }
        throw std::invalid_argument("scalar component must be a number or string");
    }
}

}  // namespace detail

template <ScalarField S>
Json scalar_to_json(const S& x) {
    if constexpr (kExactScalar<S>) {
        return Json{{"re", rational_str(x.real())}, {"im", rational_str(x.imag())}};
    } else {
        return Json{{"re", x.real()}, {"im", x.imag()}};
    }
}

// Accepts {"re":..,"im":..} (im optional), a bare number, or a bare string.
template <ScalarField S>
S scalar_from_json(const Json& j) {
    Json re = 0, im = 0;
    if (j.is_object()) {
        if (j.contains("re")) re = j.at("re");
        if (j.contains("im")) im = j.at("im");
    } else {
        re = j;
    }
    return S{detail::real_part_from_json<S>(re), detail::real_part_from_json<S>(im)};
}

template <ScalarField S>
Json poly_to_json(const Poly<S>& p) {
    Json coeffs = Json::array();
    for (const S& c : p.coeffs()) coeffs.push_back(scalar_to_json(c));
    return Json{{"coeffs", std::move(coeffs)}};
}

template <ScalarField S>
Json polyvector_to_json(const PolyVector<S>& v) {
    Json slots = Json::array();
    for (const auto& p : v.slots()) slots.push_back(poly_to_json(p));
    return Json{{"slots", std::move(slots)}};
}

inline Json multi_index_to_json(const MultiIndex& n) {
    Json out = Json::array();
    for (int v : n.entries()) out.push_back(v);
    return out;
}

template <ScalarField S>
Json measure_spec_to_json(const MeasureSpec<S>& spec) {
    if (const auto* trig = std::get_if<TrigDensity<S>>(&spec)) {
        Json coeffs = Json::array();
        for (const auto& [k, c] : trig->coeffs)
            coeffs.push_back(Json{{"k", k}, {"c", scalar_to_json(c)}});
        return Json{{"type", "trig-density"}, {"coeffs", std::move(coeffs)}};
    }
    if (const auto* bs = std::get_if<BernsteinSzego<S>>(&spec))
        return Json{{"type", "bernstein-szego"}, {"a", scalar_to_json(bs->a)}};
    const auto& la = std::get<LebesgueAtoms<S>>(spec);
    Json atoms = Json::array();
    for (const auto& atom : la.atoms)
        atoms.push_back(Json{{"z", scalar_to_json(atom.z)}, {"w", scalar_to_json(atom.w)}});
    return Json{{"type", "lebesgue-atoms"}, {"w0", scalar_to_json(la.w0)}, {"atoms", std::move(atoms)}};
}

template <ScalarField S>
Json system_to_json(const MeasureSystem<S>& system) {
    Json measures = Json::array();
    for (int j = 1; j <= system.size(); ++j) measures.push_back(measure_spec_to_json(system.spec(j)));
    return Json{{"measures", std::move(measures)}};
}

template <ScalarField S>
MeasureSpec<S> measure_spec_from_json(const Json& j, int index) {
    if (!j.is_object() || !j.contains("type"))
        throw MeasureError(index, "expected an object with a \"type\" field");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "trig-density") {
            TrigDensity<S> trig;
            if (!j.contains("coeffs") || !j.at("coeffs").is_array())
                throw MeasureError(index, "trig-density requires a \"coeffs\" array");
            for (const auto& entry : j.at("coeffs")) {
                int k = entry.at("k").get<int>();
                S c = scalar_from_json<S>(entry.at("c"));
                if (!trig.coeffs.emplace(k, std::move(c)).second)
                    throw MeasureError(index, "duplicate coefficient k = " + std::to_string(k));
            }
            return trig;
        }
        if (type == "bernstein-szego") {
            if (!j.contains("a")) throw MeasureError(index, "bernstein-szego requires \"a\"");
            return BernsteinSzego<S>{scalar_from_json<S>(j.at("a"))};
        }
        if (type == "lebesgue-atoms") {
            LebesgueAtoms<S> la;
            la.w0 = j.contains("w0") ? scalar_from_json<S>(j.at("w0")) : S{};
            if (j.contains("atoms"))
                for (const auto& entry : j.at("atoms"))
                    la.atoms.push_back(
                        Atom<S>{scalar_from_json<S>(entry.at("z")), scalar_from_json<S>(entry.at("w"))});
            return la;
        }
    } catch (const MeasureError&) {
        throw;
    } catch (const std::exception& e) {
        throw MeasureError(index, e.what());
    }
    throw MeasureError(index, "unknown measure type \"" + type + "\"");
}

// Parses and validates a full system document; failures carry the 1-based
// index of the offending measure.
template <ScalarField S>
std::shared_ptr<const MeasureSystem<S>> parse_system(const std::string& text, TolerancePolicy pol = {}) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        throw MeasureError(0, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("measures") || !doc.at("measures").is_array())
        throw MeasureError(0, "document must be an object with a \"measures\" array");
    std::vector<MeasureSpec<S>> specs;
    int index = 0;
    for (const auto& m : doc.at("measures")) {
        ++index;
        specs.push_back(measure_spec_from_json<S>(m, index));
    }
    return std::make_shared<const MeasureSystem<S>>(std::move(specs), pol);
}

inline Json identity_report_to_json(const IdentityReport& rep) {
    Json out;
    out["identity"] = rep.identity;
    out["index"] = multi_index_to_json(rep.index);
    if (rep.k > 0) out["k"] = rep.k;
    if (rep.l > 0) out["l"] = rep.l;
    out["status"] = to_string(rep.status);
    out["residual"] = rep.residual;
    out["exact_zero"] = rep.exact_zero;
    out["pass"] = rep.pass;
    if (!rep.note.empty()) out["note"] = rep.note;
    if (!rep.required_normal.empty()) {
        Json req = Json::array();
        for (const auto& m : rep.required_normal) req.push_back(multi_index_to_json(m));
        out["required_normal"] = std::move(req);
    }
    return out;
}

template <ScalarField S>
Json coeff_record_to_json(const CoeffRecord<S>& rec) {
    Json out;
    out["index"] = multi_index_to_json(rec.index);
    out["status"] = rec.normal ? "normal" : "non-normal";
    out["alpha"] = scalar_to_json(rec.alpha);
    out["beta"] = scalar_to_json(rec.beta);
    Json rho = Json::array(), kappa = Json::array();
    for (const S& v : rec.rho) rho.push_back(scalar_to_json(v));
    for (const S& v : rec.kappa) kappa.push_back(scalar_to_json(v));
    out["rho"] = std::move(rho);
    out["kappa"] = std::move(kappa);
    return out;
}

inline Json normality_to_json(const MultiIndex& n, const NormalityInfo& info, bool exact_backend) {
    Json out;
    out["index"] = multi_index_to_json(n);
    out["normal"] = info.normal;
    if (exact_backend) {
        out["det_is_zero"] = info.det_exactly_zero;
    } else {
        out["rcond"] = info.rcond.value_or(0.0);
        out["indeterminate"] = info.indeterminate;
    }
    out["abs_det"] = info.abs_det;
    out["normalized_abs_det"] = info.normalized_abs_det;
    return out;
}

template <ScalarField S>
Json cd_evaluation_to_json(const CDEvaluation<S>& ev) {
    Json out;
    Json steps = Json::array();
    for (int s : ev.path.steps) steps.push_back(s);
    out["path"] = std::move(steps);
    out["endpoint"] = multi_index_to_json(ev.path.endpoint());
    out["z"] = scalar_to_json(ev.z);
    out["zeta"] = scalar_to_json(ev.zeta);
    out["lhs"] = scalar_to_json(ev.lhs);
    out["rhs"] = scalar_to_json(ev.rhs);
    out["residual"] = ev.residual;
    out["exact_zero"] = ev.exact_zero;
    out["pass"] = ev.pass;
    return out;
}

}  // namespace mopuc
