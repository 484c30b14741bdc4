#include "ellim/catalog.hpp"
#include "ellim/identities.hpp"
#include "ellim/limits.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace ellim;
using namespace ellim::test;

namespace {

using cl = std::complex<long double>;

const RationalVec kHeineAlpha = vec("-1/4,0,0,1/4,1/4,1/2,1/2,3/4");
const RationalVec kInterior = vec("1/4,1/4,1/4,1/4,1/4,1/4,1/4,1/4");
const std::vector<double> kSchedule = {0.2, 0.1, 0.05, 0.025};

cl lift(cplx x) { return {x.real(), x.imag()}; }

cl poch_oracle(cl x, cl q, int terms) {
    cl out = 1, qj = 1;
    for (int j = 0; j < terms; ++j, qj *= q) out *= cl(1) - x * qj;
    return out;
}

// 2phi1(a, b; c; q, z) by direct summation.
cl phi21_oracle(cl a, cl b, cl c, cl q, cl z, int terms) {
    cl sum = 0, term = 1;
    for (int k = 0; k < terms; ++k) {
        sum += term;
        const cl qk = std::pow(q, static_cast<long double>(k));
        term *= (cl(1) - a * qk) * (cl(1) - b * qk) / ((cl(1) - q * qk) * (cl(1) - c * qk)) * z;
    }
    return sum;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

FaceDescriptor heine_face() { return face_from_vertices({w_ij(0, 1), w_ij(0, 2), v_ij(6, 7), v_ij(5, 7)}, PolytopeId::P, 1); }

// Centroid of the facet where the first four exponents sum to zero.
RationalVec quadruple_facet_point(int m) {
    const std::size_t n = static_cast<std::size_t>(2 * m + 6);
    for (const auto& q : bounding_inequalities(PolytopeId::P, m)) {
        if (q.c != Q(0)) continue;
        bool match = true;
        for (std::size_t i = 0; i < n; ++i) match = match && q.mu[i] == (i < 4 ? Q(-1) : Q(0));
        if (!match) continue;
        std::vector<RationalVec> tight;
        for (const auto& v : vertices(PolytopeId::P, m))
            if (q.slack(v) == Q(0)) tight.push_back(v);
        return face_from_vertices(tight, PolytopeId::P, m).centroid();
    }
    throw std::logic_error("no quadruple facet");
}

template <class F>
auto admissible(std::uint64_t seed, F&& f, int m = 1) {
    return draw_admissible(m, seed, DrawOptions{}, [&](const ParamPoint& u) {
        try {
            return f(u);
        } catch (const ContourError& e) {
            throw InadmissibleError(e.what());
        } catch (const ConstraintError& e) {
            throw InadmissibleError(e.what());
        } catch (const QuadratureError& e) {
            throw InadmissibleError(e.what());
        } catch (const DivergenceError& e) {
            throw InadmissibleError(e.what());
        }
    });
}

}  // namespace

TEST_CASE("formula selection examples") {
    const LimitFormula heine = formula_for_face(heine_face());
    CHECK(heine.tag == "2phi1");
    CHECK(heine.source == FormulaSource::PieceII);
    CHECK(heine.variant == FormulaVariant::SinglePhi);
    // The face also lies in the symmetry-broken piece, whose integral applies as well.
    const auto all = applicable_formulas(kHeineAlpha, 1);
    CHECK(std::any_of(all.begin(), all.end(), [](const LimitFormula& f) {
        return f.source == FormulaSource::PieceIII && f.variant == FormulaVariant::SymBroken2;
    }));

    const auto interior = classify_point(kInterior, PolytopeId::P, 1).face;
    REQUIRE(interior);
    CHECK(formula_for_face(*interior).variant == FormulaVariant::One);
    CHECK(formula_for_face(*interior).tag == "1");

    const LimitFormula facet = formula_for_point(quadruple_facet_point(1), 1);
    CHECK(facet.variant == FormulaVariant::ProductOnly);
    CHECK(facet.source == FormulaSource::QuadrupleFacet);
}

TEST_CASE("every face class receives a formula") {
    for (int m : {0, 1}) {
        const FaceCatalog cat = catalog_simplicial_faces(m);
        for (const auto* rows : {&cat.rows, &cat.non_simplicial})
            for (const auto& row : *rows) {
                CAPTURE(row.family_tag);
                CHECK(!applicable_formulas(row.face.centroid(), m).empty());
                if (m == 1) {
                    CHECK_NOTHROW(formula_for_face(row.face));
                    CHECK(family_tag(row.face) == row.family_tag);
                }
            }
    }
}

TEST_CASE("2phi1 face against direct summation") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto [got, u] = admissible(seed, [](const ParamPoint& u) {
            const cplx v = eval_B(kHeineAlpha, u);
            if (std::abs(u.u[1] * u.u[2]) > 0.9) throw InadmissibleError("slow series");
            return std::make_pair(v, u);
        });
        const auto& x = u.u;
        const cl q = lift(u.q), z = lift(x[1] * x[2]), c = lift(u.q * x[0] / x[7]);
        const cl expect = poch_oracle(z, q, 200) * poch_oracle(c, q, 200) *
                          phi21_oracle(lift(x[0] * x[3]), lift(x[0] * x[4]), c, q, z, 400);
        CHECK(rel(got, cplx(double(expect.real()), double(expect.imag()))) < 1e-12);
    }
}

TEST_CASE("interior and quadruple facet values") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 5; ++trial) {
        const ParamPoint u = random_params(1, rng);
        CHECK(eval_B(kInterior, u) == cplx(1.0));
        CHECK(eval_B(vec("0,1/4,1/4,1/4,1/4,1/4,1/4,1/2"), u) == cplx(1.0));
    }
    for (int m : {0, 1}) {
        const RationalVec a = quadruple_facet_point(m);
        for (int trial = 0; trial < 5; ++trial) {
            const ParamPoint u = random_params(m, rng);
            const cplx expect = qpoch_inf(u.u[0] * u.u[1] * u.u[2] * u.u[3], u.q);
            CHECK(rel(eval_B(a, u), expect) < 1e-14);
        }
    }
}

TEST_CASE("formulas agree where several apply") {
    const FaceCatalog cat = catalog_simplicial_faces(1);
    int overlaps = 0;
    for (std::size_t k = 0; k < cat.rows.size(); ++k) {
        const RationalVec a = cat.rows[k].face.centroid();
        const auto fs = applicable_formulas(a, 1);
        std::size_t usable = 0;
        for (const auto& f : fs) usable += f.source != FormulaSource::SumIntegral;
        if (usable < 2) continue;
        ++overlaps;
        CAPTURE(cat.rows[k].family_tag);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto vals = admissible(case_seed(k, seed), [&](const ParamPoint& u) {
                std::vector<cplx> v;
                for (const auto& f : fs)
                    if (f.source != FormulaSource::SumIntegral) v.push_back(evaluate(f, u));
                return v;
            });
            for (std::size_t j = 1; j < vals.size(); ++j) CHECK(rel(vals[0], vals[j]) < 1e-8);
        }
    }
    CHECK(overlaps > 0);
}

TEST_CASE("the w-integral does not depend on w") {
    const RationalVec a = vec("-1/4,-1/4,1/4,3/8,3/8,1/2,1/2,1/2");
    REQUIRE(in_sum_integral_region(a, 1));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const IdentityRecord r =
            admissible(seed, [&](const ParamPoint& u) { return w_independence(a, u, std::polar(0.83, 0.61), std::polar(1.21, -1.9)); });
        CHECK(r.residual < 1e-9);
    }
}

TEST_CASE("the w-integral at w = u_2 is the symmetric integral") {
    const RationalVec a = vec("-1/4,-1/4,1/4,3/8,3/8,1/2,1/2,1/2");
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto [sum_int, direct] = admissible(seed, [&](const ParamPoint& u) {
            return std::make_pair(eval_B_sum_integral(a, u, u.u[2]), eval_B(a, u));
        });
        CHECK(rel(sum_int, direct) < 1e-9);
    }
    CHECK_THROWS_AS(eval_B_sum_integral(kHeineAlpha, random_params(1, *std::make_unique<std::mt19937_64>(1)), 1.0),
                    std::invalid_argument);
}

TEST_CASE("limits converge") {
    const LimitWitness heine = find_limit_witness(kHeineAlpha, 1, kSchedule);
    CHECK(heine.report.verdict == ConvergenceReport::Verdict::Converging);
    CHECK(heine.report.errors.back() < 1e-3);
    for (std::size_t k = 1; k < heine.report.errors.size(); ++k)
        CHECK(heine.report.errors[k] < heine.report.errors[k - 1]);

    const RationalVec vertex = vec("0,0,0,0,0,1");
    const LimitWitness v = find_limit_witness(vertex, 0, kSchedule);
    CHECK(v.report.verdict == ConvergenceReport::Verdict::Converging);
    CHECK(formula_for_point(vertex, 0).source == FormulaSource::PieceI);
    CHECK(rel(v.report.target, evaluate(formula_for_point(vertex, 0), v.u)) < 1e-14);

    const LimitWitness in = find_limit_witness(kInterior, 1, kSchedule);
    CHECK(in.report.verdict == ConvergenceReport::Verdict::Converging);
    CHECK(in.report.target == cplx(1.0));
}

TEST_CASE("B is constant on open faces") {
    std::mt19937_64 rng(89);
    const ParamPoint u = random_params(1, rng);
    CHECK(face_constancy_check(kInterior, vec("0,1/4,1/4,1/4,1/4,1/4,1/4,1/2"), u) == 0.0);

    const RationalVec other = Q(1, 10) * (Q(1) * w_ij(0, 1) + Q(2) * w_ij(0, 2) + Q(3) * v_ij(6, 7) + Q(4) * v_ij(5, 7));
    REQUIRE(*classify_point(other, PolytopeId::P, 1).face == heine_face());
    // Same formula up to the order of roles among equal exponents, so equal up to round-off.
    const auto [d, b] = admissible(7, [&](const ParamPoint& x) {
        return std::make_pair(face_constancy_check(kHeineAlpha, other, x), eval_B(kHeineAlpha, x));
    });
    CHECK(d <= 1e-14 * std::abs(b));
    CHECK_THROWS_AS(face_constancy_check(kInterior, kHeineAlpha, u), std::invalid_argument);
}

TEST_CASE("B depends only on the orthogonal complement of the face") {
    const RationalVec other = Q(1, 10) * (Q(1) * w_ij(0, 1) + Q(2) * w_ij(0, 2) + Q(3) * v_ij(6, 7) + Q(4) * v_ij(5, 7));
    for (cplx x : {cplx(0.7), std::polar(1.0, 2.1), std::polar(0.9, -0.4)})
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto [d, b] = admissible(seed, [&](const ParamPoint& u) {
                return std::make_pair(orthogonal_dependence_check(kHeineAlpha, other, u, x), eval_B(kHeineAlpha, u));
            });
            CHECK(d < 1e-9 * std::max(1.0, std::abs(b)));
        }
    CHECK(admissible(2, [](const ParamPoint& u) { return orthogonal_dependence_check(kHeineAlpha, kHeineAlpha, u, 0.7); }) ==
          0.0);
}

TEST_CASE("limits of the m = 0 evaluation side") {
    std::mt19937_64 rng(101);
    const ParamPoint u = random_params(0, rng);
    CHECK(evaluation_limit_m0(vec("1/6,1/6,1/6,1/6,1/6,1/6"), u) == cplx(1.0));
    const cplx facet = evaluation_limit_m0(vec("-1/10,0,1/10,0,1/2,1/2"), u);
    CHECK(rel(facet, qpoch_inf(u.q / (u.u[4] * u.u[5]), u.q)) < 1e-15);
    CHECK_THROWS_AS(evaluation_limit_m0(vec("1,1,-1/2,-1/2,0,0"), u), std::invalid_argument);
}

TEST_CASE("B on P with m = 0 is the limit of the evaluation") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 50; ++trial) {
        const RationalVec a = random_point_in(PolytopeId::P, 0, rng, 1 + trial % 4);
        CAPTURE(a.str());
        const auto [b, e] = admissible(case_seed(103, trial), [&](const ParamPoint& u) {
            return std::make_pair(eval_B(a, u), evaluation_limit_m0(a, u));
        }, 0);
        CHECK(rel(b, e) < 1e-8);
    }
}

TEST_CASE("iterated limits") {
    // B at the 2phi1 face, pushed towards the interior, tends to the interior value 1.
    const RationalVec dir = kInterior - kHeineAlpha;
    const ParamPoint u = admissible(5, [](const ParamPoint& p) {
        (void)eval_B(kHeineAlpha, p);
        return p;
    });
    double prev = 1e300;
    for (double x : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double err = std::abs(eval_B(kHeineAlpha, scale_params(u, x, dir)) - eval_B(Q(1, 2) * (kHeineAlpha + kInterior), u));
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
}
