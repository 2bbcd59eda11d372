#include <catch2/catch_amalgamated.hpp>

#include "mopuc/cd.hpp"
#include "mopuc/json_io.hpp"

#include "oracles.hpp"

using namespace mopuc;
using S = GaussianRational;
using oracle::q;
using oracle::qi;

namespace {

Lattice<S> make_lattice(const std::string& text) { return Lattice<S>(parse_system<S>(text)); }
MultiIndex idx(std::vector<int> v) { return MultiIndex(std::move(v)); }

}  // namespace

TEST_CASE("path construction") {
    auto rr = make_path_round_robin(2, 4);
    CHECK(rr.steps == std::vector<int>{1, 2, 1, 2});
    CHECK(rr.endpoint() == idx({2, 2}));

    auto sl = make_path_stepline(idx({3, 0}));
    CHECK(sl.steps == std::vector<int>{1, 1, 1});
    CHECK(sl.endpoint() == idx({3, 0}));

    auto r1 = make_path_random(3, 6, 7);
    auto r2 = make_path_random(3, 6, 7);
    CHECK(r1.steps == r2.steps);  // deterministic in the seed
    CHECK(r1.length() == 6);
    for (int s : r1.steps) CHECK((s >= 1 && s <= 3));

    CHECK_THROWS_AS(make_path_explicit(2, {1, 1, 3}), std::invalid_argument);
}

TEST_CASE("one-step kernel on a single measure: both sides are 1 - z conj(zeta)") {
    auto bs = make_lattice(oracle::bs_half_r1_text());
    auto path = make_path_stepline(idx({1}));
    for (const auto& [z, zeta] : sample_cd_points<S>(6, 99)) {
        auto ev = cd_check(bs, path, z, zeta);
        S expected = q(1) - z * conj(zeta);
        CHECK(ev.lhs == expected);
        CHECK(ev.rhs == expected);
        CHECK(ev.exact_zero);
    }
    // no singularity at the origin
    auto at0 = cd_check(bs, path, S{}, S{});
    CHECK(at0.exact_zero);
    CHECK(at0.lhs == q(1));
}

TEST_CASE("admissible paths on the reference system evaluate exactly") {
    auto ref = make_lattice(oracle::reference_system_text());
    std::vector<LatticePath> paths{
        make_path_explicit(2, {1, 2}), make_path_explicit(2, {2, 1}),
        make_path_stepline(idx({5, 0})), make_path_stepline(idx({0, 6})),
        make_path_stepline(idx({8, 0}))};
    auto pts = sample_cd_points<S>(4, 2024);
    for (const auto& path : paths)
        for (const auto& [z, zeta] : pts) {
            auto ev = cd_check(ref, path, z, zeta);
            INFO("endpoint " << path.endpoint().str());
            CHECK(ev.exact_zero);
            CHECK(ev.pass);
        }
}

TEST_CASE("the hypothesis is enforced: non-normal neighbours refuse evaluation") {
    auto ref = make_lattice(oracle::reference_system_text());
    auto bad = make_path_round_robin(2, 4);  // hits (2,2), which is not normal
    try {
        cd_check(ref, bad, q(1, 3), q(1, 5));
        FAIL("expected NotNormalError");
    } catch (const NotNormalError& e) {
        CHECK(e.index == idx({2, 2}));
    }
}

TEST_CASE("mixed paths on the rich trig pair: numeric and symbolic equality") {
    auto rich = make_lattice(oracle::rich_trig_pair_text());
    std::vector<LatticePath> paths{
        make_path_round_robin(2, 6),            // endpoint (3,3)
        make_path_explicit(2, {1, 1, 2, 2, 1}), // endpoint (3,2)
        make_path_random(2, 5, 31),
    };
    auto pts = sample_cd_points<S>(3, 555);
    for (const auto& path : paths) {
        for (const auto& [z, zeta] : pts) CHECK(cd_check(rich, path, z, zeta).exact_zero);
    }
    for (const auto& path : {make_path_round_robin(2, 4), make_path_explicit(2, {1, 2, 2}),
                             make_path_explicit(2, {2, 1})}) {
        auto sym = cd_check_symbolic(rich, path);
        CHECK(sym.exact_zero);
        // both sides are polynomials of degree <= N in z and in conj(zeta)
        CHECK(sym.lhs.degree_z() <= path.length());
        CHECK(sym.lhs.degree_w() <= path.length());
        CHECK(sym.rhs.degree_z() <= path.length());
        CHECK(sym.rhs.degree_w() <= path.length());
    }
}

TEST_CASE("three measures: the slot-summed pairing telescopes exactly") {
    auto triple = make_lattice(oracle::trig_triple_text());
    for (auto steps : {std::vector<int>{1, 2, 3}, {3, 1, 2}, {2, 2, 1}}) {
        auto path = make_path_explicit(3, steps);
        for (const auto& [z, zeta] : sample_cd_points<S>(3, 4242))
            CHECK(cd_check(triple, path, z, zeta).exact_zero);
        CHECK(cd_check_symbolic(triple, path).exact_zero);
    }
}

TEST_CASE("right side is path independent given the endpoint") {
    auto rich = make_lattice(oracle::rich_trig_pair_text());
    auto p1 = make_path_explicit(2, {1, 2, 1, 2});
    auto p2 = make_path_explicit(2, {2, 1, 1, 2});
    auto p3 = make_path_explicit(2, {1, 1, 2, 2});
    REQUIRE(p1.endpoint() == p2.endpoint());
    REQUIRE(p1.endpoint() == p3.endpoint());
    for (const auto& [z, zeta] : sample_cd_points<S>(5, 808)) {
        auto e1 = cd_check(rich, p1, z, zeta);
        auto e2 = cd_check(rich, p2, z, zeta);
        auto e3 = cd_check(rich, p3, z, zeta);
        CHECK(e1.rhs == e2.rhs);
        CHECK(e1.rhs == e3.rhs);
        // and the LHS kernel sums agree too, through the identity
        CHECK(e1.lhs == e2.lhs);
    }
}

TEST_CASE("on the unit circle with zeta = z the right side vanishes") {
    auto ref = make_lattice(oracle::reference_system_text());
    auto path = make_path_stepline(idx({4, 0}));
    for (const S& z : unit_circle_points<S>(16)) {
        CHECK(z * conj(z) == q(1));  // Pythagorean parametrization is exactly unimodular
        auto ev = cd_check(ref, path, z, z);
        CHECK(ev.lhs == S{});  // the (1 - |z|^2) factor kills the kernel side
        CHECK(ev.rhs == S{});
        CHECK(ev.exact_zero);
    }
}

TEST_CASE("float backend stays within tolerance") {
    Lattice<ComplexF> rich(parse_system<ComplexF>(oracle::rich_trig_pair_text()));
    auto path = make_path_round_robin(2, 6);
    for (const auto& [z, zeta] : sample_cd_points<ComplexF>(6, 99)) {
        auto ev = cd_check(rich, path, z, zeta);
        CHECK(ev.residual <= 1e-9);
        CHECK(ev.pass);
    }
}

TEST_CASE("bivariate polynomial helpers") {
    Poly<S> f({q(1), q(2)});       // 1 + 2z
    Poly<S> g({q(3), S{}, q(1)});  // 3 + w^2
    auto b = BivariatePoly<S>::outer(f, g);
    CHECK(b.coeff(0, 0) == q(3));
    CHECK(b.coeff(1, 0) == q(6));
    CHECK(b.coeff(1, 2) == q(2));
    auto c = b.times_one_minus_zw();
    CHECK(c.coeff(0, 0) == q(3));
    CHECK(c.coeff(1, 1) == -q(3));   // -zw * 3
    CHECK(c.coeff(2, 3) == -q(2));   // -zw * 2 z w^2
    CHECK((b - b).exactly_zero());
}

TEST_CASE("cd evaluation serializes with path, points, sides, and residual") {
    auto bs = make_lattice(oracle::bs_half_r1_text());
    auto ev = cd_check(bs, make_path_stepline(idx({2})), q(1, 2), q(1, 3));
    Json j = cd_evaluation_to_json(ev);
    CHECK(j.at("path").size() == 2);
    CHECK(j.at("endpoint")[0].get<int>() == 2);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.contains("lhs"));
    CHECK(j.contains("rhs"));
    CHECK(j.at("residual").get<double>() == 0.0);
}
