#pragma once

#include "ellim/elliptic.hpp"
#include "ellim/polytope.hpp"
#include "ellim/qseries.hpp"
#include "ellim/quadrature.hpp"
#include "ellim/rootsys.hpp"

#include <string>
#include <vector>

namespace ellim {

enum class FormulaVariant {
    TrivialIntegral,  // parameters with exponent 0 or 1 only (unit-circle type integral)
    SymBroken1,       // alpha_0 = alpha_1 = -alpha_2
    SymBroken2,       // alpha_0 < alpha_1 = -alpha_2
    SymBroken3,       // alpha_1 < -alpha_2
    SumIntegralW,     // integral with the auxiliary parameter w
    PairedVWP,
    SingleVWP,
    PairedPhi,
    SinglePhi,
    ProductOnly,
    One,
};

std::string to_string(FormulaVariant v);

/// Which piece of the decomposition a formula comes from.
enum class FormulaSource { Interior, QuadrupleFacet, PieceI, PieceII, PieceIII, SumIntegral };

struct LimitFormula {
    FormulaVariant variant = FormulaVariant::One;
    FormulaSource source = FormulaSource::Interior;
    int m = 1;
    std::vector<int> roles;  // roles[k] = index of the parameter playing role k
    RationalVec alpha;       // alpha in role order: alpha[k] = original alpha[roles[k]]
    std::vector<std::string> constraints;
    std::string tag;
};

/// A factor (c z^k; q)^{+-1}, theta(c z^k; q)^{+-1} or (1 - c z^k)^{+-1}.
struct ZFactor {
    enum class Kind { Poch, Theta, Linear };
    Kind kind = Kind::Poch;
    cplx c;
    int k = 1;
    int power = 1;
};

/// prefactor * (1/2 pi i) \oint prod factors dz/z over a circle separating
/// the downward pole sequences (from (c/z;q) denominators) from the upward ones.
struct ContourIntegral {
    cplx prefactor = 1.0;
    std::vector<ZFactor> factors;
};

/// Pole moduli: max over downward sequences, min over upward sequences.
std::pair<double, double> pole_window(const ContourIntegral& I);

struct ContourError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstraintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LimitOptions {
    QuadratureOptions quad;
    double pole_gap = 1.05;  // required ratio between the radius and the nearest pole
    double margin = 0.05;    // witness parameters keep |t_r| < 1 - margin
    long series_cap = 100000;  // maximal number of series terms
    double max_cancellation = 1e6;  // bound on mean |integrand| / |integral|
};

cplx evaluate_integrand(const ContourIntegral& I, cplx z, cplx q);
cplx evaluate_integral(const ContourIntegral& I, cplx q, const LimitOptions& opt = {});

/// Every formula of the decomposition that applies at alpha; the first is the one eval_B uses.
std::vector<LimitFormula> applicable_formulas(const RationalVec& alpha, int m);
LimitFormula formula_for_point(const RationalVec& alpha, int m);
LimitFormula formula_for_face(const FaceDescriptor& face);
/// The formula of one piece (PI, PII or PIII of the decomposition) at a point
/// of sigma(piece); sigma as returned by decompose.
LimitFormula formula_for_piece(PolytopeId piece, const RationalVec& alpha, int m, const std::vector<int>& sigma);

cplx evaluate(const LimitFormula& f, const ParamPoint& u, const LimitOptions& opt = {});
cplx eval_B(const RationalVec& alpha, const ParamPoint& u, const LimitOptions& opt = {});

/// True when alpha, in some ordering, lies in the region of the w-integral.
bool in_sum_integral_region(const RationalVec& alpha, int m);
cplx eval_B_sum_integral(const RationalVec& alpha, const ParamPoint& u, cplx w, const LimitOptions& opt = {});

/// Family tag of a face: the catalog naming of the function attached to it.
std::string family_tag(const FaceDescriptor& face);

struct ConvergenceReport {
    enum class Verdict { Converging, Inconclusive, Failed };
    std::vector<double> p_values;
    std::vector<double> errors;
    cplx target;
    Verdict verdict = Verdict::Failed;
    std::string note;
};

std::string to_string(ConvergenceReport::Verdict v);

/// |E^m(u p^alpha) - B_alpha(u)| over a decreasing p schedule (real p).
ConvergenceReport verify_limit(const RationalVec& alpha, const ParamPoint& u, const std::vector<double>& p_schedule,
                               double tol_limit = 1e-3, const EllipticOptions& eopt = {},
                               const LimitOptions& lopt = {});

struct LimitWitness {
    ParamPoint u;
    ConvergenceReport report;
    int attempts = 0;
};

/// Parameters u_r = c (q y)^{(m+1)/n} y^{-alpha_r} e^{i phi_r} for a fixed list
/// of (q, y) scales, tried in order until verify_limit reports convergence.
/// Every attempt keeps |u_r p^alpha_r| < 1 over the schedule or is skipped.
LimitWitness find_limit_witness(const RationalVec& alpha, int m, const std::vector<double>& p_schedule,
                                double tol_limit = 1e-3, const EllipticOptions& eopt = {},
                                const LimitOptions& lopt = {});

/// |B_alpha(u) - B_beta(u)| for two points of the same open face.
double face_constancy_check(const RationalVec& alpha, const RationalVec& beta, const ParamPoint& u,
                            const LimitOptions& opt = {});

/// |B_alpha(u) - B_alpha(u x^{alpha - beta})| for alpha, beta in the same open face.
double orthogonal_dependence_check(const RationalVec& alpha, const RationalVec& beta, const ParamPoint& u, cplx x,
                                   const LimitOptions& opt = {});

/// u x^delta for a rational exponent vector (principal powers of x).
ParamPoint scale_params(const ParamPoint& u, cplx x, const RationalVec& delta);

/// p -> 0 limit of the product side of the m = 0 evaluation: the product of
/// (q/u_r u_s; q) over pairs with alpha_r + alpha_s = 1.
cplx evaluation_limit_m0(const RationalVec& alpha, const ParamPoint& u);

}  // namespace ellim
