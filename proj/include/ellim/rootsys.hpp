#pragma once

#include "ellim/rational_vec.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace ellim {

using cplx = std::complex<double>;

enum class RootSystem { E7, E8, OrbitS };

/// Complete sorted list of R(E8), R(E7) = {v : v.rho = 0} or S = {v : v.rho = 1}.
const std::vector<RationalVec>& enumerate_roots(RootSystem sys);

/// s_root(v) = v - (root.v) root; root must have norm 2.
RationalVec reflect(const RationalVec& root, const RationalVec& v);

/// Product of reflections, applied left to right: reflections[0] acts first.
struct WeylWord {
    std::vector<RationalVec> reflections;

    RationalVec act(const RationalVec& v) const;
    WeylWord then(const WeylWord& next) const;
    std::string str() const;
};

/// Parameters u with prod u_r = level^{m+1}, modulo u ~ -u.  For the basic
/// (p = 0) side level is q; for the elliptic side pass level = p q.
struct ParamPoint {
    int m = 1;
    std::vector<cplx> u;
    cplx q;

    double balancing_defect() const;
};

/// Solves the last coordinate for balancing and canonicalizes the sign.
ParamPoint make_param_point(int m, std::vector<cplx> first, cplx q);

/// Sign rule: the representative whose first coordinate has argument in [0, pi).
ParamPoint canonical_sign(ParamPoint t);

/// Multiplicative W(E7) action on m = 1 parameters.
ParamPoint weyl_act_param(const WeylWord& w, const ParamPoint& t, double tol = 1e-9);

/// u^delta for delta in the E8 lattice, using u^rho = level (so no square roots).
cplx monomial(const ParamPoint& u, const RationalVec& delta);

/// Roots of E7 orthogonal to every vector in fix.
std::vector<RationalVec> stabilizer_roots(const std::vector<RationalVec>& fix);

/// Cartan type of a closed root subsystem, e.g. "A2xA1"; "1" for the empty set.
std::string coxeter_type(const std::vector<RationalVec>& roots);

/// Weyl group order of a type string produced by coxeter_type.
std::uint64_t coxeter_order(const std::string& type);

/// Simple roots of the subsystem with respect to a fixed generic functional.
std::vector<RationalVec> simple_roots(const std::vector<RationalVec>& roots);

}  // namespace ellim
