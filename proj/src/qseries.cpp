#include "ellim/qseries.hpp"

#include <cmath>

namespace ellim {

namespace {

template <class R>
void check_base(const std::complex<R>& q) {
    if (!(std::abs(q) < R(1))) throw std::domain_error("q-series base must satisfy |q| < 1");
}

template <class R>
R zero_threshold() {
    return R(64) * std::numeric_limits<R>::epsilon();
}

// Smallest k >= 0 with a q^k == 1 (to round-off), or -1.
template <class R>
long termination_index(std::complex<R> a, std::complex<R> q, long cap) {
    std::complex<R> x = a;
    for (long k = 0; k < cap && std::abs(x) > R(0.5); ++k) {
        if (std::abs(R(1) - x) < zero_threshold<R>() * std::max(R(1), std::abs(x))) return k;
        x *= q;
    }
    return -1;
}

template <class R>
std::complex<R> ipow(std::complex<R> x, int e) {
    std::complex<R> r(1);
    if (e < 0) {
        x = R(1) / x;
        e = -e;
    }
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

template <class R>
std::complex<R> qpoch_inf(std::complex<R> x, std::complex<R> q, const QSeriesTolerances<R>& tol) {
    check_base(q);
    std::complex<R> prod(1);
    std::complex<R> xq = x;
    for (long j = 0; j < tol.cap; ++j) {
        if (std::abs(xq) < tol.eps_prod) return prod;
        prod *= std::complex<R>(1) - xq;
        xq *= q;
    }
    throw DivergenceError("qpoch_inf: product did not reach the truncation threshold");
}

template <class R>
std::complex<R> qpoch_k(std::complex<R> x, std::complex<R> q, long k) {
    check_base(q);
    std::complex<R> prod(1);
    if (k >= 0) {
        std::complex<R> xq = x;
        for (long j = 0; j < k; ++j) {
            prod *= std::complex<R>(1) - xq;
            xq *= q;
        }
        return prod;
    }
    // (x;q)_{-k} = 1 / prod_{j=1}^{k} (1 - x q^{-j})
    std::complex<R> xq = x;
    for (long j = 1; j <= -k; ++j) {
        xq /= q;
        prod *= std::complex<R>(1) - xq;
    }
    if (std::abs(prod) < zero_threshold<R>()) throw PoleError("qpoch_k: pole at negative index");
    return std::complex<R>(1) / prod;
}

template <class R>
std::complex<R> theta(std::complex<R> x, std::complex<R> q, const QSeriesTolerances<R>& tol) {
    if (x == std::complex<R>(0)) throw std::domain_error("theta: argument must be nonzero");
    return qpoch_inf(x, q, tol) * qpoch_inf(q / x, q, tol);
}

template <class R>
std::complex<R> phi_series(const SeriesParams<R>& p, const QSeriesTolerances<R>& tol) {
    check_base(p.q);
    const int r = static_cast<int>(p.upper.size());
    const int s = static_cast<int>(p.lower.size());
    const int e = p.n + s + 1 - r;

    long stop = -1;
    for (const auto& a : p.upper) {
        const long k = termination_index(a, p.q, tol.cap);
        if (k >= 0 && (stop < 0 || k < stop)) stop = k;
    }
    if (stop < 0 && p.z != std::complex<R>(0)) {
        if (e < 0) throw DivergenceError("phi_series: negative confluence exponent for a non-terminating series");
        if (e == 0 && !(std::abs(p.z) < R(1)))
            throw DivergenceError("phi_series: |z| >= 1 outside the convergence disk");
    }

    std::complex<R> sum(1), term(1), qk(1);
    int small_run = 0;
    for (long k = 0; k < tol.cap; ++k) {
        if (stop >= 0 && k >= stop) return sum;
        std::complex<R> num(1), den = std::complex<R>(1) - qk * p.q;
        for (const auto& a : p.upper) num *= std::complex<R>(1) - a * qk;
        for (const auto& b : p.lower) {
            const std::complex<R> f = std::complex<R>(1) - b * qk;
            if (std::abs(f) < zero_threshold<R>()) throw PoleError("phi_series: lower parameter hits q^{-k}");
            den *= f;
        }
        term *= num / den * p.z * ipow(-qk, e);
        sum += term;
        if (std::abs(term) <= tol.eps_tail * std::abs(sum)) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
        if (term == std::complex<R>(0)) return sum;
        qk *= p.q;
    }
    throw DivergenceError("phi_series: term cap reached before convergence");
}

template <class R>
SeriesParams<R> vwp_expand(const VWPParams<R>& p) {
    SeriesParams<R> s;
    const std::complex<R> sa = std::sqrt(p.a);
    s.upper = {p.a, p.q * sa, -p.q * sa};
    s.lower = {sa, -sa};
    for (const auto& b : p.b) {
        if (b == std::complex<R>(0)) throw std::domain_error("vwp_series: zero numerator parameter");
        s.upper.push_back(b);
        s.lower.push_back(p.a * p.q / b);
    }
    s.n = p.n;
    s.q = p.q;
    s.z = p.z;
    return s;
}

template <class R>
std::complex<R> vwp_series(const VWPParams<R>& p, const QSeriesTolerances<R>& tol) {
    return phi_series(vwp_expand(p), tol);
}

template std::complex<double> qpoch_inf(std::complex<double>, std::complex<double>, const QSeriesTolerances<double>&);
template std::complex<long double> qpoch_inf(std::complex<long double>, std::complex<long double>,
                                             const QSeriesTolerances<long double>&);
template std::complex<double> qpoch_k(std::complex<double>, std::complex<double>, long);
template std::complex<long double> qpoch_k(std::complex<long double>, std::complex<long double>, long);
template std::complex<double> theta(std::complex<double>, std::complex<double>, const QSeriesTolerances<double>&);
template std::complex<long double> theta(std::complex<long double>, std::complex<long double>,
                                         const QSeriesTolerances<long double>&);
template std::complex<double> phi_series(const SeriesParams<double>&, const QSeriesTolerances<double>&);
template std::complex<long double> phi_series(const SeriesParams<long double>&,
                                              const QSeriesTolerances<long double>&);
template SeriesParams<double> vwp_expand(const VWPParams<double>&);
template SeriesParams<long double> vwp_expand(const VWPParams<long double>&);
template std::complex<double> vwp_series(const VWPParams<double>&, const QSeriesTolerances<double>&);
template std::complex<long double> vwp_series(const VWPParams<long double>&, const QSeriesTolerances<long double>&);

std::complex<double> qpoch_prod(const std::vector<std::complex<double>>& xs, std::complex<double> q) {
    std::complex<double> r = 1.0;
    for (const auto& x : xs) r *= qpoch_inf(x, q);
    return r;
}

}  // namespace ellim
