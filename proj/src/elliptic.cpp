#include "ellim/elliptic.hpp"

#include "ellim/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ellim {

namespace {

constexpr double kEpsProd = 1e-18;

cplx ipow(cplx x, std::int64_t k) {
    cplx r = 1.0;
    if (k < 0) {
        x = 1.0 / x;
        k = -k;
    }
    for (std::int64_t i = 0; i < k; ++i) r *= x;
    return r;
}

cplx rational_power(cplx p, const Q& a) {
    if (a.denominator() == 1) return ipow(p, a.numerator());
    if (p.imag() == 0.0 && p.real() > 0.0) return std::pow(p.real(), to_double(a));
    return std::pow(p, to_double(a));
}

// (z;p,q) without validation, used in inner loops.
cplx pq_poch_raw(cplx z, cplx p, cplx q) {
    cplx prod = 1.0;
    cplx zp = z;
    while (std::abs(zp) >= kEpsProd) {
        cplx zq = zp;
        while (std::abs(zq) >= kEpsProd) {
            prod *= 1.0 - zq;
            zq *= q;
        }
        zp *= p;
    }
    return prod;
}

void check_balancing(int m, const std::vector<cplx>& t, const EllipticBase& base, double tol) {
    if (t.size() != static_cast<std::size_t>(2 * m + 6))
        throw std::invalid_argument("elliptic_beta_integral: need 2m+6 parameters");
    cplx prod = 1.0;
    for (const auto& x : t) prod *= x;
    const cplx target = std::pow(base.p * base.q, m + 1);
    if (std::abs(prod - target) > tol * std::abs(target))
        throw std::invalid_argument("elliptic_beta_integral: balancing condition violated");
}

}  // namespace

void EllipticBase::validate() const {
    if (!(std::abs(p) < 1.0) || !(std::abs(q) < 1.0))
        throw std::domain_error("elliptic bases must satisfy |p|, |q| < 1");
}

cplx pq_poch(cplx z, const EllipticBase& base) {
    base.validate();
    return pq_poch_raw(z, base.p, base.q);
}

cplx elliptic_gamma(cplx z, const EllipticBase& base, double pole_tol) {
    base.validate();
    if (z == 0.0) throw PoleError("elliptic_gamma: zero argument");
    const cplx den = pq_poch_raw(z, base.p, base.q);
    if (std::abs(den) < pole_tol) throw PoleError("elliptic_gamma: argument at a pole");
    return pq_poch_raw(base.p * base.q / z, base.p, base.q) / den;
}

cplx elliptic_beta_integral(int m, const std::vector<cplx>& t, const EllipticBase& base,
                            const EllipticOptions& opt) {
    base.validate();
    check_balancing(m, t, base, opt.balancing_tol);
    for (const auto& x : t)
        if (!(std::abs(x) < 1.0))
            throw std::domain_error("elliptic_beta_integral: |t_r| >= 1 needs a deformed contour");
    const cplx p = base.p, q = base.q, pq = p * q;

    cplx pref = qpoch_inf(p, p) * qpoch_inf(q, q) / 2.0;
    for (std::size_t r = 0; r < t.size(); ++r)
        for (std::size_t s = r + 1; s < t.size(); ++s) pref *= pq_poch_raw(t[r] * t[s], p, q);

    // 1/Gamma(z^{+-2}) = theta(z^{-2};p) theta(z^2;q), which stays finite at z = +-1.
    auto integrand = [&](cplx z) {
        const cplx z2 = z * z;
        cplx num = qpoch_inf(1.0 / z2, p) * qpoch_inf(p * z2, p) * qpoch_inf(z2, q) * qpoch_inf(q / z2, q);
        cplx den = 1.0;
        for (const auto& tr : t) {
            const cplx a = tr * z, b = tr / z;
            num *= pq_poch_raw(pq / a, p, q) * pq_poch_raw(pq / b, p, q);
            den *= pq_poch_raw(a, p, q) * pq_poch_raw(b, p, q);
        }
        return num / den;
    };
    const QuadratureResult res = circle_trapezoid(integrand, 1.0, opt.quad);
    if (!res.converged) throw QuadratureError("elliptic_beta_integral: quadrature did not converge");
    return pref * res.value;
}

cplx e0_evaluation_rhs(const std::vector<cplx>& t, const EllipticBase& base) {
    base.validate();
    if (t.size() != 6) throw std::invalid_argument("e0_evaluation_rhs: need six parameters");
    const cplx pq = base.p * base.q;
    cplx r = 1.0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) r *= pq_poch_raw(pq / (t[i] * t[j]), base.p, base.q);
    return r;
}

double w_e7_invariance_residual(const std::vector<cplx>& t, const WeylWord& w, const EllipticBase& base,
                                const EllipticOptions& opt) {
    const ParamPoint src{1, t, base.p * base.q};
    const ParamPoint img = weyl_act_param(w, src, opt.balancing_tol);
    const cplx a = elliptic_beta_integral(1, t, base, opt);
    const cplx b = elliptic_beta_integral(1, img.u, base, opt);
    return std::abs(a - b) / std::abs(a);
}

double ContiguousResidual::relative() const {
    double mx = 0.0;
    for (const auto& x : terms) mx = std::max(mx, std::abs(x));
    return mx > 0.0 ? std::abs(sum) / mx : std::abs(sum);
}

ContiguousResidual p_contiguous_residual(const std::vector<cplx>& t, const TriangleShift& tri,
                                         const EllipticBase& base, const EllipticOptions& opt) {
    const RationalVec rho = rho_vec(8);
    for (const auto* v : {&tri.alpha, &tri.beta, &tri.gamma})
        if (v->norm2() != Q(2) || v->dot(rho) != Q(0))
            throw std::invalid_argument("p_contiguous_residual: triangle vertices must be E7 roots");
    if (tri.alpha.dot(tri.beta) != Q(1) || tri.alpha.dot(tri.gamma) != Q(1) || tri.beta.dot(tri.gamma) != Q(1))
        throw std::invalid_argument("p_contiguous_residual: not an equilateral triangle");
    if (t.size() != 8) throw std::invalid_argument("p_contiguous_residual: need eight parameters");
    const ParamPoint tp{1, t, base.p * base.q};
    const auto& orbit = enumerate_roots(RootSystem::OrbitS);

    auto term = [&](const RationalVec& a, const RationalVec& b, const RationalVec& c) {
        cplx coef = 1.0;
        for (const auto& d : orbit)
            if (d.dot(a - b) == Q(1) && d.dot(a - c) == Q(1))
                coef *= qpoch_inf(monomial(tp, d) * ipow(base.p, d.dot(b).numerator()), base.q);
        coef *= monomial(tp, c) * theta(monomial(tp, b - c), base.q);
        return coef * elliptic_beta_integral(1, shift_by_power(t, base.p, a), base, opt);
    };
    ContiguousResidual out;
    out.terms = {term(tri.alpha, tri.beta, tri.gamma), term(tri.beta, tri.gamma, tri.alpha),
                 term(tri.gamma, tri.alpha, tri.beta)};
    out.sum = out.terms[0] + out.terms[1] + out.terms[2];
    return out;
}

std::vector<cplx> shift_by_power(const std::vector<cplx>& t, cplx p, const RationalVec& alpha) {
    if (alpha.size() != t.size()) throw std::invalid_argument("shift_by_power: size mismatch");
    std::vector<cplx> out(t.size());
    for (std::size_t r = 0; r < t.size(); ++r) out[r] = t[r] * rational_power(p, alpha[r]);
    return out;
}

}  // namespace ellim
