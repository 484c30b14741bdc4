#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ellim {

struct QuadratureOptions {
    int n_init = 64;
    int n_max = 1 << 15;
    double rtol = 1e-14;
};

struct QuadratureResult {
    std::complex<double> value;
    int nodes = 0;
    double last_delta = 0.0;  // |I_N - I_{N/2}|
    double l1_mean = 0.0;     // mean |f| over the final nodes
    bool converged = false;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::complex<double> pairwise_sum(const std::complex<double>* x, std::size_t n) {
    if (n <= 8) {
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

}  // namespace detail

/// Trapezoidal rule for  (1/2 pi i) \oint f(z) dz / z  over |z| = radius,
/// doubling the node count (reusing previous nodes) until successive values agree.
template <class F>
QuadratureResult circle_trapezoid(F&& f, double radius, const QuadratureOptions& opt = {}) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle_trapezoid: radius must be positive");
    int n = opt.n_init;
    std::vector<std::complex<double>> vals(static_cast<std::size_t>(n));
    double l1 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / n;
        vals[k] = f(std::polar(radius, ang));
        l1 += std::abs(vals[k]);
    }
    std::complex<double> prev = detail::pairwise_sum(vals.data(), vals.size()) / double(n);
    QuadratureResult res;
    while (n < opt.n_max) {
        std::vector<std::complex<double>> fresh(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            const double ang = 2.0 * std::numbers::pi * (2 * k + 1) / (2.0 * n);
            fresh[k] = f(std::polar(radius, ang));
            l1 += std::abs(fresh[k]);
        }
        const std::complex<double> odd = detail::pairwise_sum(fresh.data(), fresh.size()) / double(n);
        vals.insert(vals.end(), fresh.begin(), fresh.end());
        n *= 2;
        const std::complex<double> cur = 0.5 * (prev + odd);
        const double delta = std::abs(cur - prev);
        const double mean = l1 / n;
        res = {cur, n, delta, mean, false};
        if (!std::isfinite(delta)) throw QuadratureError("circle_trapezoid: non-finite integrand");
        if (delta <= opt.rtol * std::abs(cur) || delta <= 64.0 * 2.2e-16 * mean) {
            res.converged = true;
            return res;
        }
        prev = cur;
    }
    return res;
}

}  // namespace ellim
