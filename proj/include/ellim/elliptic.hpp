#pragma once

#include "ellim/quadrature.hpp"
#include "ellim/rootsys.hpp"

#include <complex>
#include <vector>

namespace ellim {

struct EllipticBase {
    cplx p;
    cplx q;

    void validate() const;
};

struct TriangleShift {
    RationalVec alpha, beta, gamma;
};

struct EllipticOptions {
    QuadratureOptions quad;
    double balancing_tol = 1e-10;
    double pole_tol = 1e-14;
};

/// (z;p,q)_inf = prod_{j,k >= 0} (1 - p^j q^k z).
cplx pq_poch(cplx z, const EllipticBase& base);

/// Gamma(z;p,q) = (pq/z;p,q) / (z;p,q).
cplx elliptic_gamma(cplx z, const EllipticBase& base, double pole_tol = 1e-14);

/// E^m(t) over the unit circle; requires |t_r| < 1 and prod t = (pq)^{m+1}.
cplx elliptic_beta_integral(int m, const std::vector<cplx>& t, const EllipticBase& base,
                            const EllipticOptions& opt = {});

/// prod_{r<s} (pq / t_r t_s; p, q) for six parameters.
cplx e0_evaluation_rhs(const std::vector<cplx>& t, const EllipticBase& base);

/// |E^1(t) - E^1(w t)| / |E^1(t)|.
double w_e7_invariance_residual(const std::vector<cplx>& t, const WeylWord& w, const EllipticBase& base,
                                const EllipticOptions& opt = {});

struct ContiguousResidual {
    cplx sum;
    std::vector<cplx> terms;
    double relative() const;
};

/// Three-term p-contiguous combination for an equilateral triangle of E7 roots.
ContiguousResidual p_contiguous_residual(const std::vector<cplx>& t, const TriangleShift& tri,
                                         const EllipticBase& base, const EllipticOptions& opt = {});

/// t * p^alpha with principal real powers of p (p > 0 expected for fractional alpha).
std::vector<cplx> shift_by_power(const std::vector<cplx>& t, cplx p, const RationalVec& alpha);

}  // namespace ellim
