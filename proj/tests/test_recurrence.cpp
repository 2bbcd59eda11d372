#include <catch2/catch_amalgamated.hpp>

#include "mopuc/json_io.hpp"
#include "mopuc/recurrence.hpp"

#include "oracles.hpp"

using namespace mopuc;
using S = GaussianRational;
using oracle::q;

namespace {

Lattice<S> make_lattice(const std::string& text) { return Lattice<S>(parse_system<S>(text)); }
MultiIndex idx(std::vector<int> v) { return MultiIndex(std::move(v)); }

bool all_ok_pass(const std::vector<IdentityReport>& reps) {
    for (const auto& rep : reps) {
        if (rep.status == CheckStatus::ok && !rep.pass) return false;
        if (rep.status == CheckStatus::ok && !rep.exact_zero) return false;
    }
    return true;
}

void run_everything(const Lattice<S>& lat, const MultiIndex& n, std::vector<IdentityReport>& out) {
    auto add = [&out](std::vector<IdentityReport> reps) {
        for (auto& rep : reps) out.push_back(std::move(rep));
    };
    add(verify_type2(lat, n));
    for (int k : n.support()) add(verify_type2star(lat, n, k));
    add(verify_third(lat, n));
    add(verify_A_matrix(lat, n));
    add(verify_type1(lat, n));
    for (int k = 1; k <= lat.r(); ++k)
        for (int l = 1; l <= lat.r(); ++l) {
            if (k == l) continue;
            if (k < l) add(verify_compat_polys(lat, n, k, l));
            add(verify_compat_coeffs(lat, n, k, l));
        }
}

}  // namespace

TEST_CASE("coefficient bundles at known indices") {
    auto bs = make_lattice(oracle::bs_half_r1_text());
    auto rec = coeffs(bs, idx({1}));
    CHECK(rec.alpha == q(-1, 2));
    CHECK(rec.beta == q(-1, 2));  // beta = conj(alpha) on marginal indices
    CHECK(rec.rho[0] == q(3, 4)); // 1 - |alpha|^2

    auto ref = make_lattice(oracle::reference_system_text());
    auto rec11 = coeffs(ref, idx({1, 1}));
    CHECK(rec11.alpha == q(-1, 6));
    CHECK(rec11.beta == q(-1));
    CHECK(rec11.rho[0] == q(3, 10));
    CHECK(rec11.rho[1] == q(8, 15));

    auto leb = make_lattice(oracle::lebesgue_r1_text());
    auto rec4 = coeffs(leb, idx({4}));
    CHECK(rec4.alpha == S{});
    CHECK(rec4.beta == S{});
    CHECK(rec4.rho[0] == q(1));

    // empty-product conventions at the origin
    auto rec0 = coeffs(ref, idx({0, 0}));
    CHECK(rec0.alpha == q(1));
    CHECK(rec0.beta == q(1));
    CHECK(rec0.rho == std::vector<S>{S{}, S{}});
    CHECK(rec0.kappa == std::vector<S>{S{}, S{}});

    // rho vanishes off the support
    auto rec20 = coeffs(ref, idx({2, 0}));
    CHECK(rec20.rho[1] == S{});
    CHECK(rec20.kappa[1] == S{});
    CHECK(rec20.beta == conj(rec20.alpha));
}

TEST_CASE("kappa chains down through conjugated rho") {
    // kappa_{n,k} = conj(rho_{n,k}) kappa_{n+e_k,k}, read off the leading
    // coefficients of the type I recurrence
    auto rich = make_lattice(oracle::rich_trig_pair_text());
    for (const auto& n : simplex_indices(2, 3)) {
        if (n.is_zero()) continue;
        auto rec = coeffs(rich, n);
        for (int k : n.support()) {
            auto up = coeffs(rich, n.plus(k));
            CHECK(rec.kappa[static_cast<size_t>(k - 1)] ==
                  conj(rec.rho[static_cast<size_t>(k - 1)]) * up.kappa[static_cast<size_t>(k - 1)]);
        }
    }
}

TEST_CASE("coeffs demands normality of n and its lower neighbours") {
    auto dup = make_lattice(oracle::duplicated_system_text());
    CHECK_THROWS_AS(coeffs(dup, idx({1, 1})), NotNormalError);
    // (2,2) on the reference system is the library's own non-normal wall
    auto ref = make_lattice(oracle::reference_system_text());
    CHECK_THROWS_AS(coeffs(ref, idx({2, 2})), NotNormalError);
}

TEST_CASE("gamma extraction and its algebra") {
    auto ref = make_lattice(oracle::reference_system_text());
    // (z - 1/2) - (z + 1/3) = -5/6
    CHECK(gamma(ref, idx({0, 0}), 1, 2) == q(-5, 6));
    CHECK_THROWS_AS(gamma(ref, idx({0, 0}), 1, 1), std::invalid_argument);

    for (const auto& n : {idx({0, 0}), idx({1, 0}), idx({0, 1}), idx({1, 1})}) {
        S g12 = gamma(ref, n, 1, 2);
        CHECK(gamma(ref, n, 2, 1) == -g12);  // antisymmetry
        // alpha difference relation: alpha_{n+e_k} - alpha_{n+e_l} = alpha_n gamma
        S ak = ref.type2(n.plus(1)).coeff(0);
        S al = ref.type2(n.plus(2)).coeff(0);
        CHECK(ak - al == ref.type2(n).coeff(0) * g12);
        // beta difference relation: beta_{n+e_k+e_l} gamma = beta_{n+e_l} - beta_{n+e_k}
        MultiIndex nkl = n.plus(1).plus(2);
        if (ref.is_normal(nkl).normal) {
            S bk = ref.type2star(n.plus(1)).coeff(n.norm() + 1);
            S bl = ref.type2star(n.plus(2)).coeff(n.norm() + 1);
            CHECK(ref.type2star(nkl).coeff(n.norm() + 2) * g12 == bl - bk);
        }
        // bracket relation: -<Phi_{n+e_l}, z^{n_k}>_k = <Phi_n, z^{n_k}>_k gamma
        Poly<S> zp = Poly<S>::monomial(n[1]);
        CHECK(-ref.inner(1, ref.type2(n.plus(2)), zp) == ref.inner(1, ref.type2(n), zp) * g12);
    }
}

TEST_CASE("type II recurrence verification") {
    auto ref = make_lattice(oracle::reference_system_text());
    auto reps = verify_type2(ref, idx({1, 1}));
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].status == CheckStatus::ok);
    CHECK(reps[0].exact_zero);

    // spelled out: z^2 - z/6 - 1/6 = (-1/6)(1 - z^2) + (3/10) z (z + 1/3) + (8/15) z (z - 1/2)
    Poly<S> lhs({q(-1, 6), q(-1, 6), q(1)});
    Poly<S> rhs = q(-1, 6) * Poly<S>({q(1), S{}, q(-1)}) +
                  q(3, 10) * Poly<S>({q(1, 3), q(1)}).shifted(1) +
                  q(8, 15) * Poly<S>({q(-1, 2), q(1)}).shifted(1);
    CHECK(lhs == rhs);

    // r=1 reduction and the 1x1 case
    auto bs = make_lattice(oracle::bs_half_r1_text());
    for (int m = 1; m <= 6; ++m) CHECK(all_ok_pass(verify_type2(bs, idx({m}))));
    CHECK(all_ok_pass(verify_type2(ref, idx({0, 1}))));
}

TEST_CASE("type II* recurrence and beta k-independence") {
    auto ref = make_lattice(oracle::reference_system_text());
    MultiIndex n = idx({1, 1});
    // k = 2: 1 - z^2 = (1 + z/3) + (-1) z (z + 1/3)
    CHECK(ref.type2star(n) - ref.type2star(n.minus(2)) == q(-1) * ref.type2(n.minus(2)).shifted(1));
    // k = 1: 1 - z^2 = (1 - z/2) + (-1) z (z - 1/2)
    CHECK(ref.type2star(n) - ref.type2star(n.minus(1)) == q(-1) * ref.type2(n.minus(1)).shifted(1));
    for (int k = 1; k <= 2; ++k) {
        auto reps = verify_type2star(ref, n, k);
        REQUIRE(reps.size() == 1);
        CHECK(reps[0].exact_zero);
    }
    CHECK_THROWS_AS(verify_type2star(ref, idx({1, 0}), 2), std::invalid_argument);

    auto leb = make_lattice(oracle::lebesgue_r1_text());
    CHECK(all_ok_pass(verify_type2star(leb, idx({2}), 1)));
}

TEST_CASE("third recurrence and the rho sum rule") {
    auto ref = make_lattice(oracle::reference_system_text());
    auto reps = verify_third(ref, idx({1, 1}));
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].identity == "phistar-expansion");
    CHECK(reps[0].exact_zero);
    CHECK(reps[1].identity == "rho-sum-rule");
    CHECK(reps[1].exact_zero);
    // arithmetic: (-1/6)(-1) + 3/10 + 8/15 = 1
    CHECK(q(-1, 6) * q(-1) + q(3, 10) + q(8, 15) == q(1));

    // r=1 hand expansion: 1 - z/2 = (-1/2)(z - 1/2) + (3/4) 1
    auto bs = make_lattice(oracle::bs_half_r1_text());
    CHECK(Poly<S>({q(1), q(-1, 2)}) ==
          q(-1, 2) * Poly<S>({q(-1, 2), q(1)}) + q(3, 4) * Poly<S>::one());
    CHECK(all_ok_pass(verify_third(bs, idx({1}))));
    for (int m = 1; m <= 6; ++m) CHECK(all_ok_pass(verify_third(bs, idx({m}))));
}

TEST_CASE("transfer matrix identities") {
    auto ref = make_lattice(oracle::reference_system_text());
    auto reps = verify_A_matrix(ref, idx({1, 1}));
    // r rows forward, r rows inverse, one determinant check
    REQUIRE(reps.size() == 5);
    for (const auto& rep : reps) {
        CHECK(rep.status == CheckStatus::ok);
        CHECK(rep.exact_zero);
    }
    // det(I - R) = 1 - 3/10 - 8/15 = 1/6 = alpha beta
    CHECK(q(1) - q(3, 10) - q(8, 15) == q(-1, 6) * q(-1));

    // r=1 reduction: the row identity is Phi_n = z Phi_{n-1} + alpha_n Phi*_{n-1}
    auto bs = make_lattice(oracle::bs_half_r1_text());
    for (int m = 1; m <= 5; ++m) {
        auto r1 = verify_A_matrix(bs, idx({m}));
        for (const auto& rep : r1)
            if (rep.status == CheckStatus::ok) CHECK(rep.exact_zero);
        MultiIndex n = idx({m});
        CHECK(bs.type2(n) ==
              bs.type2(n.minus(1)).shifted(1) + bs.type2(n).coeff(0) * bs.type2star(n.minus(1)));
    }

    // A A^{-1} = I whenever both alpha and beta are nonzero
    auto rec = coeffs(ref, idx({1, 1}));
    Matrix<S> a(2, 2), ainv(2, 2);
    S inv_beta = q(1) / rec.beta, inv_alpha = q(1) / rec.alpha;
    S rho_sum = rec.rho[0] + rec.rho[1];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            S delta = i == j ? q(1) : S{};
            a.at(i, j) = inv_beta * (delta - rec.rho[static_cast<size_t>(j)]);
            ainv.at(i, j) = inv_alpha * ((q(1) - rho_sum) * delta + rec.rho[static_cast<size_t>(j)]);
        }
    CHECK(a * ainv == Matrix<S>::identity(2));

    // alpha = beta = 0 on Lebesgue: both parts reported not applicable
    auto leb = make_lattice(oracle::lebesgue_r1_text());
    auto lreps = verify_A_matrix(leb, idx({2}));
    int not_applicable = 0;
    for (const auto& rep : lreps)
        if (rep.status == CheckStatus::not_applicable) ++not_applicable;
    CHECK(not_applicable == 2);

    // boundary indices have no full row set
    auto edge = verify_A_matrix(ref, idx({2, 0}));
    REQUIRE(edge.size() == 1);
    CHECK(edge[0].status == CheckStatus::not_applicable);
}

TEST_CASE("type I recurrences") {
    auto bs = make_lattice(oracle::bs_half_r1_text());
    // z * 1 = 1/2 + (3/4)(4z/3 - 2/3)
    CHECK(Poly<S>::monomial(1) ==
          q(1, 2) * Poly<S>::one() + q(3, 4) * Poly<S>({q(-2, 3), q(4, 3)}));
    for (int m = 0; m <= 5; ++m) {
        auto reps = verify_type1(bs, idx({m}));
        for (const auto& rep : reps) {
            CHECK(rep.status == CheckStatus::ok);
            CHECK(rep.exact_zero);
        }
    }

    auto leb = make_lattice(oracle::lebesgue_r1_text());
    CHECK(all_ok_pass(verify_type1(leb, idx({1}))));
    CHECK(leb.type1(idx({2})) == PolyVector<S>(std::vector<Poly<S>>{Poly<S>::monomial(1)}));

    auto ref = make_lattice(oracle::reference_system_text());
    for (const auto& n : {idx({0, 0}), idx({1, 0}), idx({0, 1}), idx({1, 1})}) {
        auto reps = verify_type1(ref, n);
        for (const auto& rep : reps) {
            INFO(rep.identity << " at " << n.str() << " k=" << rep.k << ": " << rep.note);
            CHECK(rep.status == CheckStatus::ok);
            CHECK(rep.exact_zero);
        }
    }
}

TEST_CASE("nearest-neighbour polynomial compatibilities") {
    auto ref = make_lattice(oracle::reference_system_text());
    // at the origin: (1 - z/2) - (1 + z/3) = (-1/2 - 1/3) z * 1
    CHECK(ref.type2star(idx({1, 0})) - ref.type2star(idx({0, 1})) ==
          (q(-1, 2) - q(1, 3)) * Poly<S>::one().shifted(1));
    for (const auto& n : {idx({0, 0}), idx({1, 0}), idx({0, 1}), idx({1, 1})}) {
        auto reps = verify_compat_polys(ref, n, 1, 2);
        REQUIRE(reps.size() == 5);
        for (const auto& rep : reps) {
            INFO(rep.identity << " at " << n.str() << " note=" << rep.note);
            if (rep.status == CheckStatus::ok) CHECK(rep.exact_zero);
        }
        // at indices whose upper corner is non-normal the reports must say so
        if (!ref.is_normal(n.plus(1).plus(2)).normal) {
            bool lambda_diff_skipped = false;
            for (const auto& rep : reps)
                if (rep.identity == "lambda-difference")
                    lambda_diff_skipped = rep.status == CheckStatus::precondition_failed;
            CHECK(lambda_diff_skipped);
        }
    }

    // zero-factor case of the cross identity: beta_{n+e_k} = 0 forces both
    // sides to vanish (Lebesgue marginal has beta = 0)
    auto mixed = make_lattice(R"({"measures":[
        {"type":"trig-density","coeffs":[{"k":0,"c":{"re":"1","im":"0"}}]},
        {"type":"bernstein-szego","a":{"re":"1/2","im":"0"}}]})");
    MultiIndex origin = idx({0, 0});
    S beta_k = mixed.type2star(origin.plus(1)).coeff(1);
    CHECK(beta_k == S{});
    auto reps = verify_compat_polys(mixed, origin, 1, 2);
    for (const auto& rep : reps)
        if (rep.identity == "phistar-difference-cross") {
            CHECK(rep.status == CheckStatus::ok);
            CHECK(rep.exact_zero);
        }
}

TEST_CASE("coefficient compatibility conditions") {
    auto ref = make_lattice(oracle::reference_system_text());
    // condition 3.2 by hand: rho_{(1,1),1} gamma^{12}_{(0,0)} = rho_{(1,0),1} gamma^{12}_{(1,0)}
    CHECK(q(3, 10) * q(-5, 6) == q(3, 4) * gamma(ref, idx({1, 0}), 1, 2));
    CHECK(gamma(ref, idx({1, 0}), 1, 2) == q(-1, 3));

    for (const auto& n : {idx({1, 1}), idx({2, 1}), idx({1, 2})}) {
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l) {
                if (k == l) continue;
                auto reps = verify_compat_coeffs(ref, n, k, l);
                REQUIRE(reps.size() == 5);
                for (const auto& rep : reps) {
                    INFO(rep.identity << " at " << n.str() << " k=" << k << " l=" << l
                                      << " note=" << rep.note);
                    if (rep.status == CheckStatus::ok) CHECK(rep.exact_zero);
                }
            }
    }

    // boundary indices: the 3.x family needs both components positive
    auto edge = verify_compat_coeffs(ref, idx({1, 0}), 1, 2);
    int na = 0;
    for (const auto& rep : edge)
        if (rep.status == CheckStatus::not_applicable) ++na;
    CHECK(na == 4);  // condition 2 still runs
}

TEST_CASE("precondition failures are reported, never silently passed") {
    auto dup = make_lattice(oracle::duplicated_system_text());
    auto reps = verify_type2(dup, idx({1, 1}));
    REQUIRE(reps.size() == 1);
    CHECK(reps[0].status == CheckStatus::precondition_failed);
    CHECK_FALSE(reps[0].pass);
    CHECK_THAT(reps[0].note, Catch::Matchers::ContainsSubstring("(1,1)"));
    REQUIRE_FALSE(reps[0].required_normal.empty());

    Json j = identity_report_to_json(reps[0]);
    CHECK(j.at("status").get<std::string>() == "precondition-failed");
}

TEST_CASE("every identity holds across the rich trig pair simplex") {
    auto rich = make_lattice(oracle::rich_trig_pair_text());
    std::vector<IdentityReport> reports;
    for (const auto& n : simplex_indices(2, 4)) run_everything(rich, n, reports);
    int ok = 0;
    for (const auto& rep : reports) {
        if (rep.status == CheckStatus::ok) {
            ++ok;
            INFO(rep.identity << " at " << rep.index.str() << " k=" << rep.k << " l=" << rep.l);
            CHECK(rep.exact_zero);
        }
    }
    CHECK(ok > 200);
}

TEST_CASE("randomized systems: exact residuals vanish wherever preconditions hold") {
    for (uint64_t seed : {1001ull, 1002ull, 1003ull}) {
        auto sys_json = oracle::random_system_json(seed);
        Lattice<S> lat(parse_system<S>(sys_json.dump()));
        std::vector<IdentityReport> reports;
        for (const auto& n : simplex_indices(lat.r(), 3)) run_everything(lat, n, reports);
        for (const auto& rep : reports) {
            if (rep.status != CheckStatus::ok) continue;
            INFO("seed " << seed << ": " << rep.identity << " at " << rep.index.str());
            CHECK(rep.exact_zero);
        }
    }
}
