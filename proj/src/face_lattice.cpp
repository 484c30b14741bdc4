#include "ellim/face_lattice.hpp"

#include "ellim/rootsys.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ellim {

namespace {

void require_p1(const FaceDescriptor& face, const char* what) {
    if (face.polytope != PolytopeId::P || face.m != 1)
        throw std::invalid_argument(std::string(what) + ": requires a face of P with m = 1");
}

std::vector<int> bits_of(VertexMask f) {
    std::vector<int> out;
    while (f) {
        out.push_back(std::countr_zero(f));
        f &= f - 1;
    }
    return out;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Vertex permutations of P (m = 1) induced by the 63 reflections of W(E7).
const std::vector<std::vector<int>>& reflection_actions() {
    static const std::vector<std::vector<int>> acts = [] {
        const auto& lat = face_lattice(PolytopeId::P, 1);
        const auto& vs = lat.vertex_list();
        std::vector<std::vector<int>> out;
        for (const auto& r : enumerate_roots(RootSystem::E7)) {
            if (r < -r) continue;  // one reflection per pair of opposite roots
            std::vector<int> perm(vs.size());
            for (std::size_t k = 0; k < vs.size(); ++k) {
                const auto it = std::lower_bound(vs.begin(), vs.end(), reflect(r, vs[k]));
                if (it == vs.end() || *it != reflect(r, vs[k])) throw std::logic_error("reflection leaves the vertex set");
                perm[k] = static_cast<int>(it - vs.begin());
            }
            out.push_back(std::move(perm));
        }
        return out;
    }();
    return acts;
}

}  // namespace

bool mask_lex_less(VertexMask a, VertexMask b) {
    const auto x = bits_of(a), y = bits_of(b);
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

FaceLattice::FaceLattice(PolytopeId id, int m) : id_(id), m_(m), verts_(vertices(id, m)) {
    if (verts_.size() > 64) throw std::invalid_argument("FaceLattice: more than 64 vertices");
    full_ = verts_.size() == 64 ? ~VertexMask(0) : (VertexMask(1) << verts_.size()) - 1;
    const auto ineqs = bounding_inequalities(id, m);
    for (const auto& e : ineqs) {
        VertexMask f = 0;
        for (std::size_t k = 0; k < verts_.size(); ++k)
            if (e.slack(verts_[k]) == Q(0)) f |= VertexMask(1) << k;
        facets_.push_back(f);
    }
    std::set<VertexMask> seen{full_};
    std::deque<VertexMask> queue;
    for (auto f : facets_)
        if (f && seen.insert(f).second) queue.push_back(f);
    while (!queue.empty()) {
        const VertexMask f = queue.front();
        queue.pop_front();
        for (auto g : facets_) {
            const VertexMask h = f & g;
            if (h && h != f && seen.insert(h).second) queue.push_back(h);
        }
    }
    std::vector<std::pair<int, VertexMask>> tmp;
    for (auto f : seen) tmp.emplace_back(affine_dimension(vertices_of(f)), f);
    std::sort(tmp.begin(), tmp.end());
    for (const auto& [d, f] : tmp) {
        index_[f] = faces_.size();
        faces_.push_back(f);
        dims_.push_back(d);
    }
}

int FaceLattice::dim(VertexMask f) const {
    const auto it = index_.find(f);
    if (it == index_.end()) throw std::invalid_argument("FaceLattice::dim: not a face");
    return dims_[it->second];
}

VertexMask FaceLattice::mask_of(const std::vector<RationalVec>& vs) const {
    VertexMask f = 0;
    for (const auto& v : vs) {
        const auto it = std::lower_bound(verts_.begin(), verts_.end(), v);
        if (it == verts_.end() || *it != v) throw std::invalid_argument("mask_of: not a vertex " + v.str());
        f |= VertexMask(1) << (it - verts_.begin());
    }
    return f;
}

std::vector<RationalVec> FaceLattice::vertices_of(VertexMask f) const {
    std::vector<RationalVec> out;
    for (int k : bits_of(f)) out.push_back(verts_[static_cast<std::size_t>(k)]);
    return out;
}

FaceDescriptor FaceLattice::descriptor(VertexMask f) const {
    if (!is_face(f)) throw std::invalid_argument("FaceLattice::descriptor: not a face");
    FaceDescriptor d;
    d.polytope = id_;
    d.m = m_;
    for (std::size_t k = 0; k < facets_.size(); ++k)
        if ((facets_[k] & f) == f) d.tight.push_back(static_cast<int>(k));
    d.vertices = vertices_of(f);
    d.dim = dim(f);
    return d;
}

VertexMask FaceLattice::apply(VertexMask f, const std::vector<int>& perm) {
    VertexMask out = 0;
    for (int k : bits_of(f)) out |= VertexMask(1) << perm[static_cast<std::size_t>(k)];
    return out;
}

std::vector<int> FaceLattice::coordinate_action(const std::vector<int>& coord) const {
    std::vector<int> perm(verts_.size());
    for (std::size_t k = 0; k < verts_.size(); ++k) {
        const RationalVec img = permute(verts_[k], coord);
        const auto it = std::lower_bound(verts_.begin(), verts_.end(), img);
        if (it == verts_.end() || *it != img) throw std::invalid_argument("coordinate_action: does not preserve the polytope");
        perm[k] = static_cast<int>(it - verts_.begin());
    }
    return perm;
}

std::vector<std::vector<int>> FaceLattice::symmetry_generators() const {
    const int n = static_cast<int>(ambient_size(id_, m_));
    // Blocks of coordinates permuted freely.
    std::vector<std::pair<int, int>> blocks{{0, n}};
    if (id_ == PolytopeId::PII) blocks = {{1, n}};
    if (id_ == PolytopeId::PIII) blocks = {{0, 3}, {3, n}};
    std::vector<std::vector<int>> out;
    for (const auto& [lo, hi] : blocks)
        for (int i = lo; i + 1 < hi; ++i) {
            std::vector<int> coord(n);
            std::iota(coord.begin(), coord.end(), 0);
            std::swap(coord[i], coord[i + 1]);
            out.push_back(coordinate_action(coord));
        }
    return out;
}

const std::vector<std::vector<VertexMask>>& FaceLattice::coordinate_classes() const {
    static std::mutex mu;
    std::lock_guard lock(mu);
    if (!classes_.empty()) return classes_;
    UnionFind uf(faces_.size());
    for (const auto& g : symmetry_generators())
        for (std::size_t i = 0; i < faces_.size(); ++i) uf.unite(i, index_.at(apply(faces_[i], g)));
    std::map<std::size_t, std::vector<VertexMask>> groups;
    for (std::size_t i = 0; i < faces_.size(); ++i) groups[uf.find(i)].push_back(faces_[i]);
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end(), mask_lex_less);
        classes_.push_back(std::move(members));
    }
    std::sort(classes_.begin(), classes_.end(), [&](const auto& a, const auto& b) {
        const int da = dims_[index_.at(a.front())], db = dims_[index_.at(b.front())];
        if (da != db) return da < db;
        return mask_lex_less(a.front(), b.front());
    });
    for (std::size_t c = 0; c < classes_.size(); ++c)
        for (auto f : classes_[c]) class_index_[f] = c;
    return classes_;
}

std::size_t FaceLattice::class_of(VertexMask f) const {
    coordinate_classes();
    const auto it = class_index_.find(f);
    if (it == class_index_.end()) throw std::invalid_argument("FaceLattice::class_of: not a face");
    return it->second;
}

const FaceLattice& face_lattice(PolytopeId id, int m) {
    static std::map<std::pair<int, int>, std::unique_ptr<FaceLattice>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto& slot = cache[{static_cast<int>(id), m}];
    if (!slot) slot = std::make_unique<FaceLattice>(id, m);
    return *slot;
}

VertexMask face_mask(const FaceDescriptor& face) {
    require_p1(face, "face_mask");
    const auto& lat = face_lattice(PolytopeId::P, 1);
    const VertexMask f = lat.mask_of(face.vertices);
    if (!lat.is_face(f)) throw std::invalid_argument("face_mask: vertex set is not a face");
    return f;
}

FaceOrbit face_orbit(const FaceDescriptor& face) {
    const VertexMask start = face_mask(face);
    const auto& lat = face_lattice(PolytopeId::P, 1);
    const auto& acts = reflection_actions();
    std::set<VertexMask> seen{start};
    std::deque<VertexMask> queue{start};
    while (!queue.empty()) {
        const VertexMask f = queue.front();
        queue.pop_front();
        for (const auto& a : acts) {
            const VertexMask g = FaceLattice::apply(f, a);
            if (seen.insert(g).second) queue.push_back(g);
        }
    }
    FaceOrbit out;
    std::vector<VertexMask> masks(seen.begin(), seen.end());
    std::sort(masks.begin(), masks.end(), mask_lex_less);
    std::set<std::size_t> classes;
    for (auto f : masks) {
        if (!lat.is_face(f)) throw std::logic_error("face_orbit: image is not a face");
        out.faces.push_back(lat.descriptor(f));
        classes.insert(lat.class_of(f));
    }
    out.s8_classes = classes.size();
    return out;
}

// On the interior the limit is constant and every reflection permutes the
// vertices, so the whole group is reported.
Stabilizer face_stabilizer(const FaceDescriptor& face) {
    require_p1(face, "face_stabilizer");
    Stabilizer s;
    s.roots = face.interior() ? enumerate_roots(RootSystem::E7) : stabilizer_roots(face.vertices);
    s.type = coxeter_type(s.roots);
    return s;
}

// delta.alpha is an integer for generic alpha = sum c_k v_k (sum c_k = 1)
// exactly when delta.v_k takes the same value on every vertex.
Stabilizer affine_stabilizer(const FaceDescriptor& face) {
    require_p1(face, "affine_stabilizer");
    Stabilizer s;
    if (face.interior()) {
        s.roots = enumerate_roots(RootSystem::E7);
    } else {
        for (const auto& r : enumerate_roots(RootSystem::E7)) {
            const Q first = r.dot(face.vertices.front());
            if (std::all_of(face.vertices.begin(), face.vertices.end(),
                            [&](const RationalVec& v) { return r.dot(v) == first; }))
                s.roots.push_back(r);
        }
    }
    s.type = coxeter_type(s.roots);
    return s;
}

std::string affine_stabilizer_type(const FaceDescriptor& face) { return affine_stabilizer(face).type; }

}  // namespace ellim
