#include "ellim/qseries.hpp"

#include <doctest.h>

#include <random>

using namespace ellim;

namespace {

using cd = std::complex<double>;
using cl = std::complex<long double>;

cl lift(cd x) { return {x.real(), x.imag()}; }

// Direct oracles in long double.
cl poch_oracle(cl x, cl q, int k) {
    cl out = 1;
    cl qj = 1;
    for (int j = 0; j < k; ++j, qj *= q) out *= cl(1) - x * qj;
    return out;
}

cl ipow(cl x, long e) {
    cl out = 1;
    for (long j = 0; j < e; ++j) out *= x;
    return out;
}

cl series_term_oracle(const std::vector<cl>& up, const std::vector<cl>& lo, int n, cl q, cl z, int k) {
    cl num = 1, den = poch_oracle(q, q, k);
    for (auto a : up) num *= poch_oracle(a, q, k);
    for (auto b : lo) den *= poch_oracle(b, q, k);
    const int e = n + static_cast<int>(lo.size()) + 1 - static_cast<int>(up.size());
    cl factor = ipow(q, static_cast<long>(k) * (k - 1) / 2);
    if (k % 2) factor = -factor;
    const cl f = e >= 0 ? ipow(factor, e) : cl(1) / ipow(factor, -e);
    return num / den * ipow(z, k) * f;
}

cl series_oracle(const std::vector<cl>& up, const std::vector<cl>& lo, int n, cl q, cl z, int terms) {
    cl s = 0;
    for (int k = 0; k < terms; ++k) s += series_term_oracle(up, lo, n, q, z, k);
    return s;
}

cd random_point(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> mod(lo, hi), arg(-3.14, 3.14);
    return std::polar(mod(rng), arg(rng));
}

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }
double rel(cd a, cl b) { return rel(a, cd(double(b.real()), double(b.imag()))); }

}  // namespace

TEST_CASE("infinite products") {
    CHECK(qpoch_inf<double>(0.0, 0.5) == cd(1.0));
    CHECK(qpoch_inf<double>(1.0, 0.5) == cd(0.0));

    const cl oracle = poch_oracle(0.5L, 0.5L, 200);
    CHECK(rel(qpoch_inf<double>(0.5, 0.5), oracle) < 1e-15);

    const cd x(0.3, -0.7), q = std::polar(0.6, 1.1);
    CHECK(rel(qpoch_inf(x, q), poch_oracle(lift(x), lift(q), 400)) < 1e-14);
    CHECK_THROWS_AS(qpoch_inf<double>(0.3, 1.0), std::domain_error);
}

TEST_CASE("finite products") {
    const cd x(0.4, 0.2), q(0.3, 0.5);
    CHECK(qpoch_k(x, q, 0) == cd(1.0));
    CHECK(std::abs(qpoch_k(x, q, 1) - (1.0 - x)) < 1e-16);
    CHECK(std::abs(qpoch_k(x, q, -1) - 1.0 / (1.0 - x / q)) < 1e-15);
    CHECK(rel(qpoch_k(x, q, -1), qpoch_inf(x, q) / qpoch_inf(x / q, q)) < 1e-14);
    for (long k = -5; k <= 20; ++k) {
        CAPTURE(k);
        const cd lhs = qpoch_k(x, q, k + 1);
        const cd rhs = qpoch_k(x, q, k) * (1.0 - x * std::pow(q, double(k)));
        CHECK(rel(lhs, rhs) < 1e-13);
    }
}

TEST_CASE("theta functions") {
    const cd q = std::polar(0.45, 0.3);
    CHECK(std::abs(theta(q, q)) < 1e-16);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const cd x = random_point(rng, 0.3, 2.0);
        CHECK(rel(theta(x, q), theta(q / x, q)) < 1e-13);
        CHECK(rel(theta(q * x, q), -theta(x, q) / x) < 1e-13);
        const cl o = poch_oracle(lift(x), lift(q), 300) * poch_oracle(lift(q / x), lift(q), 300);
        CHECK(rel(theta(x, q), o) < 1e-13);
    }
}

TEST_CASE("fundamental theta relation") {
    std::mt19937_64 rng(37);
    const cd q = std::polar(0.35, -0.4);
    auto pm = [&](cd a, cd b) { return theta(a * b, q) * theta(a / b, q); };
    for (int trial = 0; trial < 100; ++trial) {
        const cd w = random_point(rng, 0.5, 2.0), x = random_point(rng, 0.5, 2.0), y = random_point(rng, 0.5, 2.0),
                 z = random_point(rng, 0.5, 2.0);
        const cd t1 = pm(w, x) * pm(y, z) / y;
        const cd t2 = pm(w, y) * pm(z, x) / z;
        const cd t3 = pm(w, z) * pm(x, y) / x;
        const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
        CHECK(std::abs(t1 + t2 + t3) / scale < 1e-12);
    }
}

TEST_CASE("series examples") {
    const SeriesParams<double> zero{{0.3, 0.5}, {0.7}, 0, 0.4, 0.0};
    CHECK(phi_series(zero) == cd(1.0));

    const SeriesParams<double> p21{{0.3, 0.5}, {0.7}, 0, 0.4, 0.2};
    const cl o = series_oracle({0.3L, 0.5L}, {0.7L}, 0, 0.4L, 0.2L, 60);
    CHECK(rel(phi_series(p21), o) < 1e-15);

    // terminating: (q^-2;q)_k vanishes for k >= 3
    const cd q(0.5, 0.2);
    const SeriesParams<double> term{{1.0 / (q * q), cd(0.4, 0.1)}, {cd(0.2, -0.3)}, 0, q, cd(3.0, 1.0)};
    const cl three = series_oracle({lift(1.0 / (q * q)), cl(0.4L, 0.1L)}, {cl(0.2L, -0.3L)}, 0, lift(q), cl(3.0L, 1.0L), 3);
    CHECK(rel(phi_series(term), three) < 1e-13);
    CHECK(std::abs(series_term_oracle({lift(1.0 / (q * q)), cl(0.4L, 0.1L)}, {cl(0.2L, -0.3L)}, 0, lift(q),
                                      cl(3.0L, 1.0L), 3)) < 1e-12);
}

TEST_CASE("modified series in all three branches") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const cd q = random_point(rng, 0.2, 0.7);
        const std::vector<cd> up = {random_point(rng, 0.1, 0.9), random_point(rng, 0.1, 0.9)};
        const std::vector<cd> lo = {random_point(rng, 0.1, 0.9)};
        const cd z = random_point(rng, 0.1, 0.8);
        const std::vector<cl> upl = {lift(up[0]), lift(up[1])}, lol = {lift(lo[0])};
        for (int n : {-2, -1, 0, 1, 3}) {
            CAPTURE(n);
            const SeriesParams<double> sp{up, lo, n, q, z};
            if (n < 0) {
                // negative confluence exponent: the terms grow like q^{-k^2}
                CHECK_THROWS_AS(phi_series(sp), DivergenceError);
                continue;
            }
            const cd got = phi_series(sp);
            CHECK(rel(got, series_oracle(upl, lol, n, lift(q), lift(z), 200)) < 1e-13);
            // zeros appended on the side that reproduces the confluence exponent
            SeriesParams<double> plain{up, lo, 0, q, z};
            if (n > 0) plain.lower.insert(plain.lower.end(), n, 0.0);
            CHECK(rel(got, phi_series(plain)) < 1e-14);
        }
    }
}

TEST_CASE("negative confluence index with zeros appended above") {
    // n < 0 with a terminating upper parameter, so the series is a polynomial
    const cd q(0.4, 0.1);
    const std::vector<cd> up = {1.0 / (q * q * q), cd(0.3, 0.2)};
    const std::vector<cd> lo = {cd(0.5, -0.2)};
    for (int n : {-1, -2}) {
        const SeriesParams<double> sp{up, lo, n, q, cd(0.7, 0.3)};
        SeriesParams<double> plain{up, lo, 0, q, cd(0.7, 0.3)};
        plain.upper.insert(plain.upper.end(), -n, 0.0);
        const cl o = series_oracle({lift(up[0]), lift(up[1])}, {lift(lo[0])}, n, lift(q), cl(0.7L, 0.3L), 4);
        CHECK(rel(phi_series(sp), o) < 1e-13);
        CHECK(rel(phi_series(sp), phi_series(plain)) < 1e-14);
    }
}

TEST_CASE("series are symmetric in their upper and lower parameters") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const cd q = random_point(rng, 0.2, 0.6);
        std::vector<cd> up = {random_point(rng, 0.1, 0.9), random_point(rng, 0.1, 0.9), random_point(rng, 0.1, 0.9)};
        std::vector<cd> lo = {random_point(rng, 0.1, 0.9), random_point(rng, 0.1, 0.9)};
        const cd z = random_point(rng, 0.1, 0.6);
        const cd base = phi_series(SeriesParams<double>{up, lo, 0, q, z});
        std::swap(up[0], up[2]);
        std::swap(lo[0], lo[1]);
        CHECK(rel(base, phi_series(SeriesParams<double>{up, lo, 0, q, z})) < 1e-14);
    }
}

TEST_CASE("divergent and singular series are rejected") {
    CHECK_THROWS_AS(phi_series(SeriesParams<double>{{0.3, 0.5}, {0.7}, 0, 0.4, 1.5}), DivergenceError);
    CHECK_THROWS_AS(phi_series(SeriesParams<double>{{0.3, 0.5, 0.2}, {0.7}, 0, 0.4, 0.2}), DivergenceError);
    CHECK_THROWS_AS(phi_series(SeriesParams<double>{{0.3, 0.5}, {1.0 / 0.4}, 0, 0.4, 0.2}), PoleError);
}

TEST_CASE("very-well-poised series") {
    const cd q(0.35, 0.1), a(0.3, 0.2);
    const std::vector<cd> b = {cd(0.2, 0.1), cd(-0.3, 0.4), cd(0.5, -0.1)};
    const VWPParams<double> w0{a, b, 0, q, 0.0};
    CHECK(vwp_series(w0) == cd(1.0));

    for (int n : {0, 1, 2}) {
        const cd z(0.2, -0.1);
        const VWPParams<double> w{a, b, n, q, z};
        const SeriesParams<double> sp = vwp_expand(w);
        CHECK(sp.upper.size() == 3 + b.size());
        CHECK(sp.lower.size() == 2 + b.size());
        std::vector<cl> up, lo;
        for (auto x : sp.upper) up.push_back(lift(x));
        for (auto x : sp.lower) lo.push_back(lift(x));
        const cl t1 = series_term_oracle(up, lo, sp.n, lift(q), lift(z), 1);
        cd expect = (1.0 - a * q * q) / (1.0 - q) * z * (n % 2 ? -1.0 : 1.0);
        for (auto bi : b) expect *= (1.0 - bi) / (1.0 - a * q / bi);
        CHECK(rel(expect, t1) < 1e-14);
        CHECK(rel(vwp_series(w), series_oracle(up, lo, sp.n, lift(q), lift(z), 200)) < 1e-13);
    }
}

TEST_CASE("long double instantiations agree with double") {
    const cl q(0.3L, 0.2L), x(0.5L, -0.1L);
    const cd qd(0.3, 0.2), xd(0.5, -0.1);
    CHECK(rel(qpoch_inf(xd, qd), qpoch_inf(x, q)) < 1e-15);
    CHECK(rel(theta(xd, qd), theta(x, q)) < 1e-15);
    const SeriesParams<long double> sp{{0.3L, 0.5L}, {0.7L}, 0, 0.4L, 0.2L};
    CHECK(rel(phi_series(SeriesParams<double>{{0.3, 0.5}, {0.7}, 0, 0.4, 0.2}), phi_series(sp)) < 1e-15);
}
