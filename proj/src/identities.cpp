#include "ellim/identities.hpp"

#include "ellim/catalog.hpp"
#include "ellim/face_lattice.hpp"
#include "ellim/qseries.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace ellim {

namespace {

FaceDescriptor face_of(const RationalVec& alpha, int m) {
    const Classification c = classify_point(alpha, PolytopeId::P, m);
    if (!c.face) throw std::invalid_argument("point " + alpha.str() + " lies outside P");
    return *c.face;
}

std::vector<RationalVec> images(const WeylWord& w, const std::vector<RationalVec>& vs) {
    std::vector<RationalVec> out;
    for (const auto& v : vs) out.push_back(w.act(v));
    std::sort(out.begin(), out.end());
    return out;
}

ParamPoint act_admissible(const WeylWord& w, const ParamPoint& u) {
    try {
        return weyl_act_param(w, u);
    } catch (const std::invalid_argument& e) {
        throw InadmissibleError(e.what());
    }
}

struct Reflection {
    RationalVec root;
    std::vector<int> perm;
};

// One reflection per pair of opposite E7 roots, as a permutation of the vertices of P.
const std::vector<Reflection>& vertex_reflections() {
    static const std::vector<Reflection> out = [] {
        const auto& lat = face_lattice(PolytopeId::P, 1);
        const auto& vs = lat.vertex_list();
        std::vector<Reflection> acts;
        for (const auto& r : enumerate_roots(RootSystem::E7)) {
            if (r < -r) continue;
            Reflection a{r, std::vector<int>(vs.size())};
            for (std::size_t k = 0; k < vs.size(); ++k) {
                const RationalVec img = reflect(r, vs[k]);
                a.perm[k] = static_cast<int>(std::lower_bound(vs.begin(), vs.end(), img) - vs.begin());
            }
            acts.push_back(std::move(a));
        }
        return acts;
    }();
    return out;
}

}  // namespace

std::string to_string(IdentityKind k) {
    switch (k) {
        case IdentityKind::Symmetry: return "symmetry";
        case IdentityKind::Transformation: return "transformation";
        case IdentityKind::ThreeTerm: return "three_term";
        case IdentityKind::QContiguous: return "q_contiguous";
        case IdentityKind::Evaluation: return "evaluation";
    }
    return "?";
}

double relative_residual(const std::vector<cplx>& terms, cplx combination) {
    double scale = 0.0;
    for (auto t : terms) scale = std::max(scale, std::abs(t));
    if (scale == 0.0) return std::abs(combination);
    return std::abs(combination) / scale;
}

cplx eval_B_admissible(const RationalVec& alpha, const ParamPoint& u, const LimitOptions& opt) {
    try {
        return eval_B(alpha, u, opt);
    } catch (const ContourError& e) {
        throw InadmissibleError(e.what());
    } catch (const ConstraintError& e) {
        throw InadmissibleError(e.what());
    } catch (const QuadratureError& e) {
        throw InadmissibleError(e.what());
    } catch (const DivergenceError& e) {
        throw InadmissibleError(e.what());
    } catch (const PoleError& e) {
        throw InadmissibleError(e.what());
    }
}

IdentityRecord symmetry_identity(const FaceDescriptor& face, const WeylWord& w, const ParamPoint& u,
                                 const LimitOptions& opt) {
    if (face.polytope != PolytopeId::P || face.m != 1)
        throw std::invalid_argument("symmetry_identity: face of P with m = 1 expected");
    for (const auto& v : face.vertices)
        if (w.act(v) != v) throw std::invalid_argument("symmetry_identity: " + w.str() + " moves vertex " + v.str());
    const RationalVec alpha = face.centroid();
    const ParamPoint wu = act_admissible(w, u);
    IdentityRecord rec;
    rec.kind = IdentityKind::Symmetry;
    rec.faces = {face};
    rec.weyl_word = w;
    rec.witness_params = u;
    rec.terms = {eval_B_admissible(alpha, u, opt), eval_B_admissible(alpha, wu, opt)};
    rec.residual = relative_residual(rec.terms, rec.terms[0] - rec.terms[1]);
    rec.label = family_tag(face);
    return rec;
}

IdentityRecord transformation_identity(const FaceDescriptor& face_src, const WeylWord& w, const ParamPoint& u,
                                       const LimitOptions& opt) {
    if (face_src.polytope != PolytopeId::P || face_src.m != 1)
        throw std::invalid_argument("transformation_identity: face of P with m = 1 expected");
    const auto img = images(w, face_src.vertices);
    if (img == face_src.vertices) throw std::invalid_argument("transformation_identity: " + w.str() + " maps the face to itself");
    const RationalVec alpha = face_src.centroid();
    const RationalVec beta = w.act(alpha);
    const FaceDescriptor dst = face_from_vertices(img, PolytopeId::P, 1);
    const ParamPoint wu = act_admissible(w, u);
    IdentityRecord rec;
    rec.kind = IdentityKind::Transformation;
    rec.faces = {face_src, dst};
    rec.weyl_word = w;
    rec.witness_params = u;
    rec.terms = {eval_B_admissible(alpha, u, opt), eval_B_admissible(beta, wu, opt)};
    rec.residual = relative_residual(rec.terms, rec.terms[0] - rec.terms[1]);
    rec.label = family_tag(face_src) + " = " + family_tag(dst);
    return rec;
}

std::vector<ChainMember> transformation_chain(const FaceDescriptor& face) {
    const auto& lat = face_lattice(PolytopeId::P, 1);
    const auto& acts = vertex_reflections();
    const VertexMask start = face_mask(face);
    // parent[f] = (previous face, reflection index)
    std::unordered_map<VertexMask, std::pair<VertexMask, int>> parent{{start, {start, -1}}};
    std::deque<VertexMask> queue{start};
    std::vector<VertexMask> order;
    while (!queue.empty()) {
        const VertexMask f = queue.front();
        queue.pop_front();
        order.push_back(f);
        for (std::size_t k = 0; k < acts.size(); ++k) {
            const VertexMask g = FaceLattice::apply(f, acts[k].perm);
            if (parent.emplace(g, std::make_pair(f, static_cast<int>(k))).second) queue.push_back(g);
        }
    }
    std::vector<ChainMember> out;
    std::set<std::size_t> classes;
    for (VertexMask f : order) {
        if (!classes.insert(lat.class_of(f)).second) continue;
        std::vector<RationalVec> roots;
        for (VertexMask g = f; g != start; g = parent.at(g).first) roots.push_back(acts[parent.at(g).second].root);
        std::reverse(roots.begin(), roots.end());
        out.push_back({WeylWord{std::move(roots)}, lat.descriptor(f)});
    }
    return out;
}

bool is_equilateral(const TriangleShift& tri) {
    const RationalVec ab = tri.alpha - tri.beta, ac = tri.alpha - tri.gamma, bc = tri.beta - tri.gamma;
    const RationalVec rho = rho_vec(tri.alpha.size());
    for (const auto* r : {&ab, &ac, &bc})
        if (r->norm2() != Q(2) || r->dot(rho) != Q(0) || !(r->all_integer() || r->all_half_integer())) return false;
    return ab.dot(ac) == Q(1);
}

std::vector<TriangleShift> triangles_among(const std::vector<RationalVec>& points) {
    std::vector<TriangleShift> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            for (std::size_t k = j + 1; k < points.size(); ++k) {
                TriangleShift t{points[i], points[j], points[k]};
                if (is_equilateral(t)) out.push_back(std::move(t));
            }
    return out;
}

IdentityRecord three_term_relation(const TriangleShift& tri, const ParamPoint& u, const LimitOptions& opt) {
    if (u.m != 1) throw std::invalid_argument("three_term_relation: m = 1 parameters expected");
    for (const auto* v : {&tri.alpha, &tri.beta, &tri.gamma})
        if (!in_polytope(*v, PolytopeId::P, 1)) throw std::invalid_argument("three_term_relation: " + v->str() + " lies outside P");
    if (!is_equilateral(tri)) throw std::invalid_argument("three_term_relation: not an equilateral triangle of E7 roots");
    const auto& orbit = enumerate_roots(RootSystem::OrbitS);
    const RationalVec& norm = tri.alpha;
    auto term = [&](const RationalVec& a, const RationalVec& b, const RationalVec& c) {
        cplx coef = 1.0;
        for (const auto& d : orbit)
            if (d.dot(a) == Q(1) && d.dot(b) == Q(0) && d.dot(c) == Q(0)) coef *= qpoch_inf(monomial(u, d), u.q);
        coef *= monomial(u, c - norm) * theta(monomial(u, b - c), u.q);
        return coef * eval_B_admissible(a, u, opt);
    };
    IdentityRecord rec;
    rec.kind = IdentityKind::ThreeTerm;
    rec.faces = {face_of(tri.alpha, 1), face_of(tri.beta, 1), face_of(tri.gamma, 1)};
    rec.triangle = tri;
    rec.witness_params = u;
    rec.terms = {term(tri.alpha, tri.beta, tri.gamma), term(tri.beta, tri.gamma, tri.alpha),
                 term(tri.gamma, tri.alpha, tri.beta)};
    rec.residual = relative_residual(rec.terms, rec.terms[0] + rec.terms[1] + rec.terms[2]);
    rec.label = family_tag(rec.faces[0]);
    return rec;
}

Phi21 phi21_of(const ParamPoint& u) {
    if (u.m != 1 || u.u.size() != 8) throw std::invalid_argument("phi21_of: m = 1 parameters expected");
    return {u.u[0] * u.u[3], u.u[0] * u.u[4], u.q * u.u[0] / u.u[7], u.u[1] * u.u[2], u.q};
}

IdentityRecord q_contiguous_example(const Phi21& x, QShift shift) {
    auto f = [&](cplx a, cplx b, cplx c, cplx z) {
        try {
            return phi_series(SeriesParams<double>{{a, b}, {c}, 0, x.q, z});
        } catch (const DivergenceError& e) {
            throw InadmissibleError(e.what());
        } catch (const PoleError& e) {
            throw InadmissibleError(e.what());
        }
    };
    const cplx base = f(x.a, x.b, x.c, x.z);
    const cplx zq = f(x.a, x.b, x.c, x.q * x.z);
    IdentityRecord rec;
    rec.kind = IdentityKind::QContiguous;
    switch (shift) {
        case QShift::A:
            rec.terms = {-(1.0 - x.a) * f(x.q * x.a, x.b, x.c, x.z), -x.a * zq, base};
            rec.label = "a -> aq";
            break;
        case QShift::B:
            rec.terms = {-(1.0 - x.b) * f(x.a, x.q * x.b, x.c, x.z), -x.b * zq, base};
            rec.label = "b -> bq";
            break;
        case QShift::C: {
            const cplx c1 = x.c / x.q;
            rec.terms = {-(1.0 - c1) * f(x.a, x.b, c1, x.z), -c1 * zq, base};
            rec.label = "c -> c/q";
            break;
        }
    }
    rec.residual = relative_residual(rec.terms, rec.terms[0] + rec.terms[1] + rec.terms[2]);
    return rec;
}

IdentityRecord q_contiguous_example(const ParamPoint& u, QShift shift) {
    IdentityRecord rec = q_contiguous_example(phi21_of(u), shift);
    rec.witness_params = u;
    const RationalVec alpha = parse_rational_vec("-1/4,0,0,1/4,1/4,1/2,1/2,3/4");
    rec.faces = {face_of(alpha, 1)};
    return rec;
}

std::vector<IdentityRecord> evaluation_catalog_m0(std::uint64_t seed, const DrawOptions& draw, const LimitOptions& opt) {
    struct Row {
        RationalVec alpha;
        FaceDescriptor face;
        LimitFormula formula;
        std::string label;
    };
    std::vector<Row> rows;
    const FaceCatalog cat = catalog_simplicial_faces(0);
    for (const auto* list : {&cat.rows, &cat.non_simplicial})
        for (const auto& r : *list) rows.push_back({r.face.centroid(), r.face, r.formula, r.family_tag});
    const auto& lat = face_lattice(PolytopeId::P, 0);
    const auto ineqs = bounding_inequalities(PolytopeId::P, 0);
    for (std::size_t k = 0; k < ineqs.size(); ++k) {
        int neg = 0;
        for (std::size_t i = 0; i < ineqs[k].mu.size(); ++i) neg += ineqs[k].mu[i] == Q(-1);
        if (ineqs[k].c != Q(0) || neg != 4) continue;
        const FaceDescriptor face = lat.descriptor(lat.facet_masks()[k]);
        const RationalVec c = face.centroid();
        rows.push_back({c, face, formula_for_point(c, 0), "quadruple facet"});
        break;  // the others are coordinate permutations of this one
    }
    std::vector<IdentityRecord> out;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Row& row = rows[k];
        IdentityRecord rec;
        rec.kind = IdentityKind::Evaluation;
        rec.faces = {row.face};
        rec.label = row.label;
        rec.seed = case_seed(seed, k);
        auto attempt = [&](const ParamPoint& u) {
            std::vector<cplx> values;
            try {
                values.push_back(evaluate(row.formula, u, opt));
            } catch (const std::runtime_error& e) {
                throw InadmissibleError(e.what());
            }
            for (const auto& f : applicable_formulas(row.alpha, 0)) {
                if (f.source == FormulaSource::SumIntegral) continue;
                try {
                    values.push_back(evaluate(f, u, opt));
                } catch (const std::runtime_error&) {
                }
            }
            return std::make_pair(u, values);
        };
        const auto [u, values] = draw_admissible(0, rec.seed, draw, attempt, &rec.attempts);
        const cplx closed = evaluation_limit_m0(row.alpha, u);
        rec.witness_params = u;
        rec.terms = {closed};
        for (auto v : values) {
            rec.terms.push_back(v);
            rec.residual = std::max(rec.residual, relative_residual({v, closed}, v - closed));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

IdentityRecord w_independence(const RationalVec& alpha, const ParamPoint& u, cplx w1, cplx w2, const LimitOptions& opt) {
    IdentityRecord rec;
    rec.kind = IdentityKind::Evaluation;
    rec.faces = {face_of(alpha, u.m)};
    rec.witness_params = u;
    rec.label = "w-independence";
    try {
        rec.terms = {eval_B_sum_integral(alpha, u, w1, opt), eval_B_sum_integral(alpha, u, w2, opt)};
    } catch (const std::runtime_error& e) {
        throw InadmissibleError(e.what());
    }
    rec.residual = relative_residual(rec.terms, rec.terms[0] - rec.terms[1]);
    return rec;
}

}  // namespace ellim
