#pragma once

#include "ellim/rational_vec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ellim {

enum class PolytopeId { P, PI, PII, PIII, Pext };

std::string to_string(PolytopeId id);
PolytopeId parse_polytope_id(const std::string& s);

/// mu . alpha <= c, with mu scaled to a primitive integer vector.
struct Inequality {
    RationalVec mu;
    Q c;
    std::string label;

    Q slack(const RationalVec& alpha) const { return c - mu.dot(alpha); }
    /// Canonical key modulo adding multiples of sum(alpha) = const, for deduplication.
    std::pair<RationalVec, Q> key(const Q& level) const;
};

enum class InequalityForm { Standard, E7Invariant };

/// Ambient dimension 2m+6 (6 for Pext).
std::size_t ambient_size(PolytopeId id, int m);
/// Value of sum(alpha) on the polytope: m+1, or 1 for Pext.
Q hyperplane_level(PolytopeId id, int m);

std::vector<RationalVec> vertices(PolytopeId id, int m);
std::vector<Inequality> bounding_inequalities(PolytopeId id, int m, InequalityForm form = InequalityForm::Standard);

struct FaceDescriptor {
    PolytopeId polytope = PolytopeId::P;
    int m = 1;
    std::vector<int> tight;              // indices into bounding_inequalities(polytope, m)
    std::vector<RationalVec> vertices;   // sorted
    int dim = 0;

    bool interior() const { return tight.empty(); }
    bool simplicial() const { return vertices.size() == static_cast<std::size_t>(dim) + 1; }
    RationalVec centroid() const;
    bool operator==(const FaceDescriptor& o) const { return polytope == o.polytope && m == o.m && vertices == o.vertices; }
};

struct Classification {
    std::optional<FaceDescriptor> face;  // empty when alpha lies outside
    std::vector<Inequality> violated;
};

/// Open face containing alpha, or the violated inequalities.
Classification classify_point(const RationalVec& alpha, PolytopeId id, int m);

bool in_polytope(const RationalVec& alpha, PolytopeId id, int m);

/// Face spanned by a vertex subset (its tight set and full vertex set).
FaceDescriptor face_from_vertices(const std::vector<RationalVec>& verts, PolytopeId id, int m);

/// Membership of alpha in P_I, sigma(P_II) or sigma(P_III).  sigma[k] is the
/// coordinate of alpha playing role k in the standard polytope.
struct Membership {
    PolytopeId kind;
    std::vector<int> sigma;
};

std::vector<Membership> decompose(const RationalVec& alpha, int m);

/// alpha permuted into standard position: out[k] = alpha[sigma[k]].
RationalVec permute(const RationalVec& alpha, const std::vector<int>& sigma);

int affine_dimension(const std::vector<RationalVec>& pts);

}  // namespace ellim
