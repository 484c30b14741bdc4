#pragma once

#include "ellim/elliptic.hpp"
#include "ellim/limits.hpp"
#include "ellim/polytope.hpp"
#include "ellim/random_params.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ellim {

enum class IdentityKind { Symmetry, Transformation, ThreeTerm, QContiguous, Evaluation };

std::string to_string(IdentityKind k);

struct IdentityRecord {
    IdentityKind kind = IdentityKind::Symmetry;
    std::vector<FaceDescriptor> faces;
    std::optional<WeylWord> weyl_word;
    std::optional<TriangleShift> triangle;  // three points of P, not roots
    double residual = 0.0;                  // |combination| / max |term|
    ParamPoint witness_params;
    std::vector<cplx> terms;
    std::string label;
    std::uint64_t seed = 0;
    int attempts = 0;
};

/// |a - b| / max(|a|, |b|), or |sum| / max |term| for a list.
double relative_residual(const std::vector<cplx>& terms, cplx combination);

/// B at the centroid of face, at u and at w(u); w must fix every vertex of the face.
IdentityRecord symmetry_identity(const FaceDescriptor& face, const WeylWord& w, const ParamPoint& u,
                                 const LimitOptions& opt = {});

/// B at the centroid alpha of face_src and at (w(alpha), w(u)); w must move the face.
IdentityRecord transformation_identity(const FaceDescriptor& face_src, const WeylWord& w, const ParamPoint& u,
                                       const LimitOptions& opt = {});

struct ChainMember {
    WeylWord word;  // maps the source face to face
    FaceDescriptor face;
};

/// One face per coordinate-permutation class in the W(E7) orbit of face,
/// each with a shortest reflection word reaching it.  The first member is
/// the face itself.
std::vector<ChainMember> transformation_chain(const FaceDescriptor& face);

/// True when the pairwise differences are E7 roots with (a-b).(a-c) = 1.
bool is_equilateral(const TriangleShift& tri);

/// Every equilateral triple among the points (in index order).
std::vector<TriangleShift> triangles_among(const std::vector<RationalVec>& points);

/// Limit of the p-contiguous relation, divided by u^alpha so that only
/// E8-lattice monomials occur.
IdentityRecord three_term_relation(const TriangleShift& tri, const ParamPoint& u, const LimitOptions& opt = {});

/// Shift paired with z -> qz in the q-contiguous relation of the 2phi1.
enum class QShift { A, B, C };

struct Phi21 {
    cplx a, b, c, z, q;
};

/// The 2phi1 attached to the face {w01, w02, v67, v57}:
/// a = u0 u3, b = u0 u4, c = q u0 / u7, z = u1 u2.
Phi21 phi21_of(const ParamPoint& u);

/// -(1 - a) f(aq) - a f(qz) + f = 0 for QShift::A, its a <-> b mirror for
/// QShift::B, and -(1 - c/q) f(c/q) - (c/q) f(qz) + f = 0 for QShift::C.
IdentityRecord q_contiguous_example(const Phi21& x, QShift shift);
IdentityRecord q_contiguous_example(const ParamPoint& u, QShift shift);

/// One evaluation record per class of simplicial faces of the m = 0 pieces,
/// plus the interior of PII and the facets where four exponents sum to zero.
/// Each record compares the formula of the row (and, where several apply,
/// every applicable formula) with evaluation_limit_m0 at a random admissible u.
std::vector<IdentityRecord> evaluation_catalog_m0(std::uint64_t seed = 1, const DrawOptions& draw = {},
                                                  const LimitOptions& opt = {});

/// The w-integral at two values of w (m = 0 or 1).
IdentityRecord w_independence(const RationalVec& alpha, const ParamPoint& u, cplx w1, cplx w2,
                              const LimitOptions& opt = {});

/// eval_B with evaluation failures reported as InadmissibleError.
cplx eval_B_admissible(const RationalVec& alpha, const ParamPoint& u, const LimitOptions& opt = {});

}  // namespace ellim
