#include "ellim/catalog.hpp"

#include "ellim/face_lattice.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace ellim {

namespace {

bool simplicial(const FaceDescriptor& f) { return f.vertices.size() == static_cast<std::size_t>(f.dim) + 1; }

FaceCatalog build_m1() {
    FaceCatalog cat;
    cat.m = 1;
    const auto& lat = face_lattice(PolytopeId::P, 1);
    for (const auto& cls : lat.coordinate_classes()) {
        FaceCatalogRow row;
        row.face = lat.descriptor(cls.front());
        row.class_size = cls.size();
        row.formula = formula_for_face(row.face);
        row.family_tag = row.formula.tag;
        row.symmetry_type = face_stabilizer(row.face).type;
        row.affine_symmetry_type = affine_stabilizer_type(row.face);
        (simplicial(row.face) ? cat.rows : cat.non_simplicial).push_back(std::move(row));
    }
    return cat;
}

// Some permutation sigma puts every vertex into the piece.
std::optional<std::vector<int>> contained_in(const std::vector<RationalVec>& verts, PolytopeId piece, int m) {
    const RationalVec c = [&] {
        RationalVec s(verts.front().size());
        for (const auto& v : verts) s += v;
        return Q(1, static_cast<std::int64_t>(verts.size())) * s;
    }();
    if (!in_polytope(c, PolytopeId::P, m)) return std::nullopt;
    if (piece == PolytopeId::PI) {
        std::vector<int> id(c.size());
        std::iota(id.begin(), id.end(), 0);
        if (std::all_of(verts.begin(), verts.end(), [&](const RationalVec& v) { return in_polytope(v, piece, m); }))
            return id;
        return std::nullopt;
    }
    for (const auto& mem : decompose(c, m)) {
        if (mem.kind != piece) continue;
        if (std::all_of(verts.begin(), verts.end(),
                        [&](const RationalVec& v) { return in_polytope(permute(v, mem.sigma), piece, m); }))
            return mem.sigma;
    }
    return std::nullopt;
}

FaceCatalog build_m0() {
    FaceCatalog cat;
    cat.m = 0;
    const PolytopeId pieces[] = {PolytopeId::PI, PolytopeId::PII, PolytopeId::PIII};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& lat = face_lattice(pieces[k], 0);
        for (const auto& cls : lat.coordinate_classes()) {
            FaceDescriptor face = lat.descriptor(cls.front());
            bool earlier = false;
            for (std::size_t j = 0; j < k && !earlier; ++j)
                earlier = contained_in(face.vertices, pieces[j], 0).has_value();
            if (earlier) continue;
            FaceCatalogRow row;
            row.class_size = cls.size();
            std::vector<int> id(face.vertices.front().size());
            std::iota(id.begin(), id.end(), 0);
            row.formula = formula_for_piece(pieces[k], face.centroid(), 0, id);
            row.family_tag = row.formula.tag;
            row.face = std::move(face);
            (simplicial(row.face) ? cat.rows : cat.non_simplicial).push_back(std::move(row));
        }
    }
    std::stable_sort(cat.rows.begin(), cat.rows.end(),
                     [](const FaceCatalogRow& a, const FaceCatalogRow& b) { return a.face.dim < b.face.dim; });
    return cat;
}

}  // namespace

FaceCatalog catalog_simplicial_faces(int m) {
    static std::mutex mu;
    static std::map<int, FaceCatalog> cache;
    if (m != 0 && m != 1) throw std::invalid_argument("catalog_simplicial_faces: m must be 0 or 1");
    std::lock_guard lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, m == 1 ? build_m1() : build_m0()).first;
    return it->second;
}

const FaceCatalogRow& catalog_row_of(const FaceDescriptor& face) {
    static const FaceCatalog cat = catalog_simplicial_faces(1);
    const auto& lat = face_lattice(PolytopeId::P, 1);
    const VertexMask rep = lat.coordinate_classes()[lat.class_of(face_mask(face))].front();
    for (const auto* list : {&cat.rows, &cat.non_simplicial})
        for (const auto& row : *list)
            if (lat.mask_of(row.face.vertices) == rep) return row;
    throw std::logic_error("catalog_row_of: class missing from the catalog");
}

}  // namespace ellim
