#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace ellim;
using namespace ellim::test;

namespace {

// Brute force over integer and half-integer vectors with coordinates in [-2, 2].
std::vector<RationalVec> brute_force_e8() {
    std::vector<RationalVec> out;
    auto scan = [&](const std::vector<Q>& grid) {
        std::vector<std::size_t> idx(8, 0);
        while (true) {
            RationalVec v(8);
            Q n2 = 0, s = 0;
            for (int i = 0; i < 8; ++i) {
                v[i] = grid[idx[i]];
                n2 += v[i] * v[i];
                s += v[i];
            }
            if (n2 == Q(2) && s.denominator() == 1 && s.numerator() % 2 == 0) out.push_back(v);
            int k = 0;
            while (k < 8 && ++idx[k] == grid.size()) idx[k++] = 0;
            if (k == 8) break;
        }
    };
    scan({Q(-2), Q(-1), Q(0), Q(1), Q(2)});
    scan({Q(-3, 2), Q(-1, 2), Q(1, 2), Q(3, 2)});
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("root counts agree with brute-force enumeration") {
    const auto e8 = brute_force_e8();
    CHECK(e8.size() == 240);
    CHECK(enumerate_roots(RootSystem::E8) == e8);

    const RationalVec rho = rho_vec(8);
    std::vector<RationalVec> e7, s;
    for (const auto& v : e8) {
        if (v.dot(rho) == Q(0)) e7.push_back(v);
        if (v.dot(rho) == Q(1)) s.push_back(v);
    }
    CHECK(enumerate_roots(RootSystem::E7) == e7);
    CHECK(enumerate_roots(RootSystem::OrbitS) == s);
    CHECK(e7.size() == 126);
    CHECK(s.size() == 56);
}

TEST_CASE("reflect examples") {
    const RationalVec e0 = unit_vec(8, 0), e1 = unit_vec(8, 1);
    CHECK(reflect(e0 - e1, e0) == e1);

    const RationalVec a = unit_vec(8, 2) - unit_vec(8, 3);
    CHECK(reflect(a, e0) == e0);

    const RationalVec r = rho_vec(8) - e0 - e1 - unit_vec(8, 2) - unit_vec(8, 3);
    // r.e0 = -1/2, so s_r(e0) = e0 + r/2.
    CHECK(reflect(r, e0) == vec("3/4,-1/4,-1/4,-1/4,1/4,1/4,1/4,1/4"));
    CHECK(reflect(r, e0).norm2() == Q(1));

    CHECK_THROWS_AS(reflect(e0, e1), std::invalid_argument);
}

TEST_CASE("reflections are involutive isometries") {
    std::mt19937_64 rng(11);
    const auto& roots = enumerate_roots(RootSystem::E7);
    std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
        const RationalVec& a = roots[pick(rng)];
        RationalVec u(8), v(8);
        for (int i = 0; i < 8; ++i) {
            u[i] = random_rational(rng, -3, 3);
            v[i] = random_rational(rng, -3, 3);
        }
        CHECK(reflect(a, u).dot(reflect(a, v)) == u.dot(v));
        CHECK(reflect(a, reflect(a, u)) == u);
        CHECK(reflect(a, u).dot(rho_vec(8)) == u.dot(rho_vec(8)));
    }
}

TEST_CASE("multiplicative action of a transposition swaps parameters") {
    std::mt19937_64 rng(3);
    const ParamPoint u = random_unit_params(rng);
    const WeylWord w{{unit_vec(8, 3) - unit_vec(8, 4)}};
    ParamPoint expect = u;
    std::swap(expect.u[3], expect.u[4]);
    CHECK(param_distance(weyl_act_param(w, u), expect) < 1e-14);
}

TEST_CASE("multiplicative action of a half-integer root") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const ParamPoint u = random_unit_params(rng);
        const auto& x = u.u;
        const cplx s = std::sqrt(x[0] * x[3] * x[4] * x[7] / u.q);
        ParamPoint expect = u;
        expect.u = {x[0] / s, x[1] * s, x[2] * s, x[3] / s, x[4] / s, x[5] * s, x[6] * s, x[7] / s};
        const RationalVec r = rho_vec(8) - unit_vec(8, 0) - unit_vec(8, 3) - unit_vec(8, 4) - unit_vec(8, 7);
        const ParamPoint got = weyl_act_param(WeylWord{{r}}, u);
        CHECK(param_distance(got, expect) < 1e-12);
        CHECK(got.balancing_defect() < 1e-12);
    }
}

TEST_CASE("action preserves balancing and composes") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const ParamPoint u = random_unit_params(rng, std::polar(0.4, 0.7));
        const WeylWord w1 = random_word(rng, 6), w2 = random_word(rng, 6);
        const ParamPoint a = weyl_act_param(w1, u);
        CHECK(a.balancing_defect() < 1e-10);
        const ParamPoint seq = weyl_act_param(w2, a);
        const ParamPoint cat = weyl_act_param(w1.then(w2), u);
        CHECK(param_distance(seq, cat) < 1e-10);
    }
}

TEST_CASE("a reflection applied twice is the identity up to sign") {
    std::mt19937_64 rng(19);
    for (const auto& r : enumerate_roots(RootSystem::E7)) {
        const ParamPoint u = random_unit_params(rng);
        CHECK(param_distance(weyl_act_param(WeylWord{{r, r}}, u), u) < 1e-12);
    }
}

TEST_CASE("canonical sign") {
    ParamPoint t = make_param_point(1, {-1.0, 2.0, 0.5, 0.5, 1.0, 1.0, 1.0}, 0.3);
    CHECK(t.u[0].real() > 0.0);
    CHECK(t.balancing_defect() < 1e-14);
    ParamPoint neg = t;
    for (auto& x : neg.u) x = -x;
    CHECK(param_distance(canonical_sign(neg), t) == 0.0);
    CHECK(canonical_sign(neg).u[0] == t.u[0]);
}

TEST_CASE("weyl_act_param rejects unbalanced input") {
    ParamPoint t = make_param_point(1, {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, 0.3);
    t.u[0] *= 2.0;
    CHECK_THROWS_AS(weyl_act_param(WeylWord{{unit_vec(8, 0) - unit_vec(8, 1)}}, t), std::invalid_argument);
}

TEST_CASE("stabilizer of the 2phi1 face") {
    const std::vector<RationalVec> fix = {w_ij(0, 1), w_ij(0, 2), v_ij(6, 7), v_ij(5, 7)};
    auto got = stabilizer_roots(fix);
    const RationalVec rho = rho_vec(8);
    auto e = [](int i) { return unit_vec(8, i); };
    std::vector<RationalVec> expect = {e(3) - e(4), rho - e(0) - e(3) - e(4) - e(7), rho - e(0) - e(3) - e(5) - e(6),
                                       rho - e(0) - e(4) - e(5) - e(6)};
    for (std::size_t k = 0, n = expect.size(); k < n; ++k) expect.push_back(-expect[k]);
    std::sort(got.begin(), got.end());
    std::sort(expect.begin(), expect.end());
    CHECK(got == expect);
    CHECK(coxeter_type(got) == "A2xA1");
    CHECK(coxeter_order("A2xA1") == 12);
}

TEST_CASE("stabilizer edge cases") {
    CHECK(stabilizer_roots(enumerate_roots(RootSystem::OrbitS)).empty());

    const RationalVec v67 = v_ij(6, 7);
    std::size_t brute = 0;
    for (const auto& r : enumerate_roots(RootSystem::E7)) brute += r.dot(v67) == Q(0);
    CHECK(stabilizer_roots({v67}).size() == brute);
    CHECK(brute == 72);  // E6
    CHECK(coxeter_type(stabilizer_roots({v67})) == "E6");
}

TEST_CASE("stabilizers are closed under their own reflections") {
    std::mt19937_64 rng(23);
    const auto& s = enumerate_roots(RootSystem::OrbitS);
    std::uniform_int_distribution<std::size_t> pick(0, s.size() - 1);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<RationalVec> fix;
        for (int k = 1 + trial % 4; k > 0; --k) fix.push_back(s[pick(rng)]);
        const auto roots = stabilizer_roots(fix);
        const std::set<RationalVec> set(roots.begin(), roots.end());
        for (const auto& a : roots)
            for (const auto& b : roots)
                if (a.dot(b) == Q(1) || a.dot(b) == Q(-1)) CHECK(set.count(reflect(a, b)) == 1);
        CHECK_NOTHROW(coxeter_type(roots));
    }
}

TEST_CASE("coxeter types") {
    CHECK(coxeter_type({}) == "1");
    CHECK(coxeter_order("1") == 1);
    CHECK(coxeter_type(enumerate_roots(RootSystem::E7)) == "E7");
    CHECK(coxeter_order("E7") == 2903040);
    CHECK(coxeter_type(enumerate_roots(RootSystem::E8)) == "E8");
    CHECK(simple_roots(enumerate_roots(RootSystem::E7)).size() == 7);

    const RationalVec a = unit_vec(8, 0) - unit_vec(8, 1);
    CHECK(coxeter_type({a, -a}) == "A1");
    const RationalVec b = unit_vec(8, 1) - unit_vec(8, 2);
    CHECK_THROWS_AS(coxeter_type({a, -a, b, -b}), std::invalid_argument);
}

TEST_CASE("monomials use u^rho = q") {
    std::mt19937_64 rng(29);
    const ParamPoint u = random_unit_params(rng);
    CHECK(std::abs(monomial(u, rho_vec(8)) - u.q) < 1e-14);
    CHECK(std::abs(monomial(u, v_ij(2, 5)) - u.u[2] * u.u[5]) < 1e-14);
    CHECK(std::abs(monomial(u, w_ij(2, 5)) - u.q / (u.u[2] * u.u[5])) < 1e-14);
}
