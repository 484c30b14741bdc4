#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ellim {

/// Raised when a series is outside the regime where direct summation converges.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a denominator vanishes.
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class R>
struct QSeriesTolerances {
    R eps_prod = std::numeric_limits<R>::epsilon() / R(200);  // about 1e-18 for double
    R eps_tail = std::numeric_limits<R>::epsilon() / R(2);
    long cap = 100000;
};

/// (x;q)_inf.
template <class R>
std::complex<R> qpoch_inf(std::complex<R> x, std::complex<R> q, const QSeriesTolerances<R>& tol = {});

/// (x;q)_k for any integer k, with (x;q)_{-k} = 1/(x q^{-k};q)_k.
template <class R>
std::complex<R> qpoch_k(std::complex<R> x, std::complex<R> q, long k);

/// theta(x;q) = (x, q/x; q)_inf.
template <class R>
std::complex<R> theta(std::complex<R> x, std::complex<R> q, const QSeriesTolerances<R>& tol = {});

/// Series sum_k (a;q)_k / (q, b;q)_k z^k ((-1)^k q^{k(k-1)/2})^{n+s+1-r}
/// where r = upper.size(), s = lower.size().
template <class R>
struct SeriesParams {
    std::vector<std::complex<R>> upper;
    std::vector<std::complex<R>> lower;
    int n = 0;
    std::complex<R> q;
    std::complex<R> z;
};

/// Very-well-poised series W^(n)(a; b_1, ...; q, z).
template <class R>
struct VWPParams {
    std::complex<R> a;
    std::vector<std::complex<R>> b;
    int n = 0;
    std::complex<R> q;
    std::complex<R> z;
};

template <class R>
std::complex<R> phi_series(const SeriesParams<R>& p, const QSeriesTolerances<R>& tol = {});

template <class R>
SeriesParams<R> vwp_expand(const VWPParams<R>& p);

template <class R>
std::complex<R> vwp_series(const VWPParams<R>& p, const QSeriesTolerances<R>& tol = {});

extern template std::complex<double> qpoch_inf(std::complex<double>, std::complex<double>,
                                               const QSeriesTolerances<double>&);
extern template std::complex<long double> qpoch_inf(std::complex<long double>, std::complex<long double>,
                                                    const QSeriesTolerances<long double>&);
extern template std::complex<double> qpoch_k(std::complex<double>, std::complex<double>, long);
extern template std::complex<long double> qpoch_k(std::complex<long double>, std::complex<long double>, long);
extern template std::complex<double> theta(std::complex<double>, std::complex<double>,
                                           const QSeriesTolerances<double>&);
extern template std::complex<long double> theta(std::complex<long double>, std::complex<long double>,
                                                const QSeriesTolerances<long double>&);
extern template std::complex<double> phi_series(const SeriesParams<double>&, const QSeriesTolerances<double>&);
extern template std::complex<long double> phi_series(const SeriesParams<long double>&,
                                                     const QSeriesTolerances<long double>&);
extern template SeriesParams<double> vwp_expand(const VWPParams<double>&);
extern template SeriesParams<long double> vwp_expand(const VWPParams<long double>&);
extern template std::complex<double> vwp_series(const VWPParams<double>&, const QSeriesTolerances<double>&);
extern template std::complex<long double> vwp_series(const VWPParams<long double>&,
                                                     const QSeriesTolerances<long double>&);

/// Product of (x_i;q)_inf over a list.
std::complex<double> qpoch_prod(const std::vector<std::complex<double>>& xs, std::complex<double> q);

}  // namespace ellim
