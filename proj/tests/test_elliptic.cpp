#include "ellim/elliptic.hpp"
#include "ellim/qseries.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <numbers>

using namespace ellim;
using namespace ellim::test;

namespace {

using cl = std::complex<long double>;

cl lift(cplx x) { return {x.real(), x.imag()}; }

// Direct double product in long double.
cl pq_poch_oracle(cl z, cl p, cl q, int terms = 120) {
    cl out = 1, pj = 1;
    for (int j = 0; j < terms; ++j, pj *= p) {
        cl qk = 1;
        for (int k = 0; k < terms; ++k, qk *= q) {
            const cl x = pj * qk * z;
            if (std::abs(x) < 1e-24L) break;
            out *= cl(1) - x;
        }
    }
    return out;
}

cl gamma_oracle(cl z, cl p, cl q, int terms = 120) {
    return pq_poch_oracle(p * q / z, p, q, terms) / pq_poch_oracle(z, p, q, terms);
}

cl poch_oracle(cl x, cl q, int terms = 200) {
    cl out = 1, qj = 1;
    for (int j = 0; j < terms; ++j, qj *= q) out *= cl(1) - x * qj;
    return out;
}

// E^m by a fixed-size trapezoidal rule on nodes offset from z = +-1.
cplx beta_integral_oracle(const std::vector<cplx>& t, cplx p, cplx q, int nodes) {
    const cl P = lift(p), Q = lift(q);
    cl pref = poch_oracle(P, P) * poch_oracle(Q, Q) / cl(2);
    for (std::size_t r = 0; r < t.size(); ++r)
        for (std::size_t s = r + 1; s < t.size(); ++s) pref *= pq_poch_oracle(lift(t[r] * t[s]), P, Q, 40);
    cl sum = 0;
    for (int k = 0; k < nodes; ++k) {
        const long double ang = 2.0L * std::numbers::pi_v<long double> * (k + 0.5L) / nodes;
        const cl z = std::polar(1.0L, ang);
        cl f = cl(1) / (gamma_oracle(z * z, P, Q, 40) * gamma_oracle(cl(1) / (z * z), P, Q, 40));
        for (auto tr : t) f *= gamma_oracle(lift(tr) * z, P, Q, 40) * gamma_oracle(lift(tr) / z, P, Q, 40);
        sum += f;
    }
    const cl v = pref * sum / cl(nodes);
    return {double(v.real()), double(v.imag())};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }
double rel(cplx a, cl b) { return rel(a, cplx(double(b.real()), double(b.imag()))); }

// 2m+5 random moduli in [lo, hi], the last one solved from balancing and kept in [lo, hi].
std::vector<cplx> draw_t(std::mt19937_64& rng, int m, cplx pq, double lo, double hi) {
    std::uniform_real_distribution<double> mod(lo, hi), arg(-3.14159, 3.14159);
    while (true) {
        std::vector<cplx> t;
        cplx prod = 1.0;
        for (int r = 0; r < 2 * m + 5; ++r) {
            t.push_back(std::polar(mod(rng), arg(rng)));
            prod *= t.back();
        }
        t.push_back(std::pow(pq, m + 1) / prod);
        if (std::abs(t.back()) >= lo && std::abs(t.back()) <= hi) return t;
    }
}

}  // namespace

TEST_CASE("two-base products") {
    const EllipticBase b{0.2, 0.35};
    CHECK(pq_poch(0.0, b) == cplx(1.0));
    CHECK(rel(pq_poch(0.3, b), pq_poch_oracle(0.3L, 0.2L, 0.35L)) < 1e-15);
    const cplx z(0.4, -0.8), q = std::polar(0.5, 0.9);
    CHECK(rel(pq_poch(z, EllipticBase{0.0, q}), qpoch_inf(z, q)) < 1e-15);
    const EllipticBase c{std::polar(0.3, -0.5), q};
    CHECK(rel(pq_poch(z, c), pq_poch_oracle(lift(z), lift(c.p), lift(q), 150)) < 1e-14);
    CHECK_THROWS_AS(pq_poch(0.3, EllipticBase{1.0, 0.5}), std::domain_error);
}

TEST_CASE("elliptic gamma function laws") {
    std::mt19937_64 rng(53);
    const EllipticBase b{std::polar(0.3, 0.4), std::polar(0.45, -1.0)};
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_real_distribution<double> mod(0.2, 2.0), arg(0.0, 2.0 * std::numbers::pi);
        const cplx z = std::polar(mod(rng), arg(rng));
        const cplx g = elliptic_gamma(z, b);
        CHECK(std::abs(g * elliptic_gamma(b.p * b.q / z, b) - 1.0) < 1e-12);
        CHECK(rel(elliptic_gamma(b.q * z, b), theta(z, b.p) * g) < 1e-12);
        CHECK(rel(elliptic_gamma(b.p * z, b), theta(z, b.q) * g) < 1e-12);
        if (trial < 10) CHECK(rel(g, gamma_oracle(lift(z), lift(b.p), lift(b.q))) < 1e-13);
    }
    const EllipticBase r{0.15, 0.2};
    CHECK(std::abs(elliptic_gamma(std::sqrt(0.03), r) - 1.0) < 1e-14);
    CHECK_THROWS_AS(elliptic_gamma(1.0, r), PoleError);
}

TEST_CASE("the m = 0 integral evaluates") {
    std::mt19937_64 rng(59);
    const EllipticBase b{0.15, 0.2};
    for (int trial = 0; trial < 10; ++trial) {
        const auto t = draw_t(rng, 0, b.p * b.q, 0.3, 0.8);
        const cplx e = elliptic_beta_integral(0, t, b);
        CHECK(rel(e, e0_evaluation_rhs(t, b)) < 1e-8);
        if (trial < 2) CHECK(rel(e, beta_integral_oracle(t, b.p, b.q, 256)) < 1e-10);
    }
}

TEST_CASE("evaluation side is symmetric") {
    std::mt19937_64 rng(61);
    const EllipticBase b{0.15, 0.2};
    auto t = draw_t(rng, 0, b.p * b.q, 0.3, 0.8);
    const cplx r0 = e0_evaluation_rhs(t, b);
    std::vector<cplx> neg;
    for (auto x : t) neg.push_back(-x);
    CHECK(rel(r0, e0_evaluation_rhs(neg, b)) < 1e-15);
    std::swap(t[0], t[4]);
    std::swap(t[1], t[5]);
    CHECK(rel(r0, e0_evaluation_rhs(t, b)) < 1e-14);
}

TEST_CASE("E(t) = E(-t)") {
    std::mt19937_64 rng(67);
    const EllipticBase b{0.2, std::polar(0.3, 0.6)};
    for (int m : {0, 1}) {
        const auto t = draw_t(rng, m, b.p * b.q, 0.3, 0.9);
        std::vector<cplx> neg;
        for (auto x : t) neg.push_back(-x);
        CHECK(rel(elliptic_beta_integral(m, t, b), elliptic_beta_integral(m, neg, b)) < 1e-12);
    }
}

TEST_CASE("m = 1 integral against an independent quadrature") {
    std::mt19937_64 rng(71);
    const EllipticBase b{0.15, 0.2};
    const auto t = draw_t(rng, 1, b.p * b.q, 0.35, 0.7);
    CHECK(rel(elliptic_beta_integral(1, t, b), beta_integral_oracle(t, b.p, b.q, 256)) < 1e-10);
}

TEST_CASE("integral preconditions") {
    const EllipticBase b{0.15, 0.2};
    std::vector<cplx> t = {0.1, 0.1, 0.1, 0.5, 0.5, 0.03 / 0.00025};
    CHECK_THROWS_AS(elliptic_beta_integral(0, t, b), std::domain_error);
    t = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(elliptic_beta_integral(0, t, b), std::invalid_argument);
}

TEST_CASE("trapezoidal error decays geometrically") {
    // mean of 1/(1 - z/2) over the unit circle is 1
    auto f = [](cplx z) { return 1.0 / (1.0 - z / 2.0); };
    double prev = 1.0;
    for (int n = 4; n <= 64; n *= 2) {
        const double err = std::abs(circle_trapezoid(f, 1.0, QuadratureOptions{n / 2, n, 0.0}).value - 1.0);
        if (prev > 1e-14) CHECK(err < prev / 10.0);
        prev = err;
    }
    const auto res = circle_trapezoid(f, 1.0);
    CHECK(res.converged);
    CHECK(std::abs(res.value - 1.0) < 1e-15);
}

TEST_CASE("invariance under W(E7)") {
    std::mt19937_64 rng(73);
    const EllipticBase b{0.15, 0.2};
    const cplx pq = b.p * b.q;
    auto e = [](int i) { return unit_vec(8, i); };

    // Moduli near (pq)^{1/4} keep the image of a half-integer root inside the unit circle.
    const double s = std::pow(std::abs(pq), 0.25);
    const auto t = draw_t(rng, 1, pq, 0.8 * s, 1.25 * s);
    CHECK(w_e7_invariance_residual(t, WeylWord{{e(2) - e(5)}}, b) < 1e-10);
    CHECK(w_e7_invariance_residual(t, WeylWord{{e(2) - e(5), e(2) - e(5)}}, b) < 1e-10);

    const RationalVec half = rho_vec(8) - e(0) - e(1) - e(2) - e(3);
    int done = 0;
    for (int trial = 0; trial < 50 && done < 5; ++trial) {
        const auto u = draw_t(rng, 1, pq, 0.8 * s, 1.25 * s);
        const ParamPoint img = weyl_act_param(WeylWord{{half}}, ParamPoint{1, u, pq});
        bool inside = true;
        for (auto x : img.u) inside = inside && std::abs(x) < 0.95;
        if (!inside) continue;
        CHECK(w_e7_invariance_residual(u, WeylWord{{half}}, b) < 1e-8);
        ++done;
    }
    CHECK(done == 5);
}

TEST_CASE("p-contiguous relation") {
    std::mt19937_64 rng(79);
    const EllipticBase b{0.15, 0.2};
    auto e = [](int i) { return unit_vec(8, i); };
    const TriangleShift base{e(1) - e(0), e(2) - e(0), e(3) - e(0)};

    auto params_for = [&](const TriangleShift& tri) {
        std::vector<double> bound(8, 1.0);
        for (const auto* v : {&tri.alpha, &tri.beta, &tri.gamma})
            for (std::size_t r = 0; r < 8; ++r) bound[r] = std::min(bound[r], std::pow(0.15, -to_double((*v)[r])));
        std::uniform_real_distribution<double> mod(0.3, 0.95), arg(-3.14159, 3.14159);
        while (true) {
            std::vector<cplx> t;
            cplx prod = 1.0;
            for (std::size_t r = 0; r < 7; ++r) {
                t.push_back(std::polar(bound[r] * mod(rng), arg(rng)));
                prod *= t.back();
            }
            t.push_back(std::pow(b.p * b.q, 2) / prod);
            const double x = std::abs(t[7]) / bound[7];
            if (x > 0.05 && x < 0.95) return t;
        }
    };

    const auto t = params_for(base);
    const auto res = p_contiguous_residual(t, base, b);
    CHECK(res.terms.size() == 3);
    CHECK(res.relative() < 1e-8);

    const auto swapped = p_contiguous_residual(t, TriangleShift{base.alpha, base.gamma, base.beta}, b);
    CHECK(swapped.relative() < 1e-8);
    CHECK(std::abs(res.sum - swapped.sum) <= 1e-8 * std::abs(res.terms[0]));

    for (int k = 0; k < 3; ++k) {
        const WeylWord w = random_word(rng, 3);
        const TriangleShift tri{w.act(base.alpha), w.act(base.beta), w.act(base.gamma)};
        CHECK(tri.alpha.dot(tri.beta) == Q(1));
        CHECK(p_contiguous_residual(params_for(tri), tri, b).relative() < 1e-8);
    }
}

TEST_CASE("shifts by rational powers of p") {
    const std::vector<cplx> t = {0.5, 0.4, 0.3};
    const auto s = shift_by_power(t, 0.25, vec("1,-1/2,0"));
    CHECK(std::abs(s[0] - 0.125) < 1e-16);
    CHECK(std::abs(s[1] - 0.8) < 1e-15);
    CHECK(s[2] == cplx(0.3));
}
