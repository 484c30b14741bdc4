#pragma once

#include "ellim/polytope.hpp"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ellim {

/// Bit k set means the k-th vertex (in sorted order) belongs to the face.
using VertexMask = std::uint64_t;

/// All faces of one of the polytopes, as vertex masks.  Faces are the
/// non-empty intersections of facets, plus the whole polytope.
class FaceLattice {
public:
    FaceLattice(PolytopeId id, int m);

    PolytopeId polytope() const { return id_; }
    int m() const { return m_; }
    const std::vector<RationalVec>& vertex_list() const { return verts_; }
    const std::vector<VertexMask>& facet_masks() const { return facets_; }
    /// Sorted by dimension, then mask.
    const std::vector<VertexMask>& faces() const { return faces_; }
    VertexMask full_mask() const { return full_; }

    bool is_face(VertexMask f) const { return index_.count(f) > 0; }
    int dim(VertexMask f) const;
    VertexMask mask_of(const std::vector<RationalVec>& vs) const;
    std::vector<RationalVec> vertices_of(VertexMask f) const;
    FaceDescriptor descriptor(VertexMask f) const;

    /// Image of a face under the vertex permutation perm (perm[k] = image of vertex k).
    static VertexMask apply(VertexMask f, const std::vector<int>& perm);
    /// Vertex permutation induced by a permutation of coordinates (new[k] = old[coord[k]]).
    std::vector<int> coordinate_action(const std::vector<int>& coord) const;
    /// Generators of the coordinate symmetry group preserving this polytope.
    std::vector<std::vector<int>> symmetry_generators() const;

    /// Orbit classes of all faces under symmetry_generators(), each sorted,
    /// with the representative (lexicographically smallest vertex list) first.
    const std::vector<std::vector<VertexMask>>& coordinate_classes() const;
    /// Index into coordinate_classes() of the class containing f.
    std::size_t class_of(VertexMask f) const;

private:
    PolytopeId id_;
    int m_;
    std::vector<RationalVec> verts_;
    std::vector<VertexMask> facets_;
    std::vector<VertexMask> faces_;
    std::unordered_map<VertexMask, std::size_t> index_;
    std::vector<int> dims_;
    VertexMask full_ = 0;
    mutable std::vector<std::vector<VertexMask>> classes_;
    mutable std::unordered_map<VertexMask, std::size_t> class_index_;
};

/// Shared lattice instances (built once, thread safe).
const FaceLattice& face_lattice(PolytopeId id, int m);

/// Lexicographic order of the sorted vertex index lists of two masks.
bool mask_lex_less(VertexMask a, VertexMask b);

struct FaceOrbit {
    std::vector<FaceDescriptor> faces;  // every face in the W(E7) orbit
    std::size_t s8_classes = 0;         // number of distinct faces up to coordinate permutation
};

/// W(E7) orbit of a face of P (m = 1), generated by reflections acting on vertices.
FaceOrbit face_orbit(const FaceDescriptor& face);

struct Stabilizer {
    std::vector<RationalVec> roots;
    std::string type;
};

/// Roots of E7 fixing every vertex of the face.
Stabilizer face_stabilizer(const FaceDescriptor& face);

/// Roots of E7 whose reflection preserves alpha + Lambda(E7) for generic alpha in the face.
Stabilizer affine_stabilizer(const FaceDescriptor& face);
std::string affine_stabilizer_type(const FaceDescriptor& face);

/// Face of P (m = 1) as a vertex mask of the shared lattice.
VertexMask face_mask(const FaceDescriptor& face);

}  // namespace ellim
