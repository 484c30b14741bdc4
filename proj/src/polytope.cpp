#include "ellim/polytope.hpp"

#include "ellim/rootsys.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ellim {

namespace {

void require_supported(PolytopeId id, int m) {
    if (m < 0) throw std::invalid_argument("polytope: m must be non-negative");
    if (id == PolytopeId::Pext && m != 0) throw std::invalid_argument("polytope: Pext is only defined for m = 0");
}

std::int64_t lcm_denominators(const RationalVec& v, const Q& c) {
    std::int64_t l = c.denominator();
    for (std::size_t i = 0; i < v.size(); ++i) l = std::lcm(l, v[i].denominator());
    return l;
}

// Scale (mu, c) by a positive factor so that all entries are coprime integers.
void make_primitive(RationalVec& mu, Q& c) {
    const std::int64_t l = lcm_denominators(mu, c);
    mu *= Q(l);
    c *= Q(l);
    std::int64_t g = std::abs(c.numerator());
    for (std::size_t i = 0; i < mu.size(); ++i) g = std::gcd(g, std::abs(mu[i].numerator()));
    if (g > 1) {
        mu *= Q(1, g);
        c *= Q(1, g);
    }
}

class Builder {
public:
    Builder(std::size_t n, Q level) : n_(n), level_(level) {}

    void add(RationalVec mu, Q c, std::string label) {
        make_primitive(mu, c);
        Inequality ineq{std::move(mu), c, std::move(label)};
        if (seen_.insert(ineq.key(level_)).second) out_.push_back(std::move(ineq));
    }

    std::size_t n() const { return n_; }
    std::vector<Inequality> take() { return std::move(out_); }

private:
    std::size_t n_;
    Q level_;
    std::set<std::pair<RationalVec, Q>> seen_;
    std::vector<Inequality> out_;
};

std::string idx(std::size_t i) { return std::to_string(i); }

std::string set_label(const std::vector<std::size_t>& s) {
    std::string out = "{";
    for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + idx(s[k]);
    return out + "}";
}

void for_each_subset(const std::vector<std::size_t>& pool, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (cur.size() == k) {
            f(cur);
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            cur.push_back(pool[i]);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

std::vector<std::size_t> range_without(std::size_t n, std::initializer_list<std::size_t> skip) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(skip.begin(), skip.end(), i) == skip.end()) out.push_back(i);
    return out;
}

// (|S|-2) alpha_i + sum_S alpha_j >= 0, written as <= 0.
void add_subset_bound(Builder& b, std::size_t i, const std::vector<std::size_t>& s) {
    RationalVec mu(b.n());
    mu[i] -= Q(static_cast<std::int64_t>(s.size()) - 2);
    for (auto j : s) mu[j] -= Q(1);
    b.add(mu, Q(0), "(|S|-2)a" + idx(i) + "+sum_S a >= 0, S=" + set_label(s));
}

std::vector<Inequality> standard_p(int m) {
    const std::size_t n = 2 * m + 6;
    Builder b(n, Q(m + 1));
    for (std::size_t i = 0; i < n; ++i) b.add(-unit_vec(n, i), Q(1, 2), "a" + idx(i) + " >= -1/2");
    if (m > 0) {
        for (std::size_t i = 0; i < n; ++i) b.add(unit_vec(n, i), Q(1), "a" + idx(i) + " <= 1");
        for (std::size_t i = 0; i < n; ++i)
            for_each_subset(range_without(n, {i}), 3, [&](const std::vector<std::size_t>& s) {
                RationalVec mu = unit_vec(n, i);
                for (auto j : s) mu[j] -= Q(1);
                b.add(mu, Q(1), "a" + idx(i) + " <= 1+sum a" + set_label(s));
            });
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) b.add(unit_vec(n, i) - unit_vec(n, j), Q(1), "a" + idx(i) + "-a" + idx(j) + " <= 1");
    for (std::size_t k = 3; k <= static_cast<std::size_t>(m) + 3; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for_each_subset(range_without(n, {i}), k, [&](const std::vector<std::size_t>& s) { add_subset_bound(b, i, s); });
    return b.take();
}

std::vector<Inequality> standard_pi(int m) {
    const std::size_t n = 2 * m + 6;
    Builder b(n, Q(m + 1));
    for (std::size_t i = 0; i < n; ++i) b.add(-unit_vec(n, i), Q(0), "a" + idx(i) + " >= 0");
    if (m > 0)
        for (std::size_t i = 0; i < n; ++i) b.add(unit_vec(n, i), Q(1), "a" + idx(i) + " <= 1");
    return b.take();
}

std::vector<Inequality> standard_pii(int m) {
    const std::size_t n = 2 * m + 6;
    Builder b(n, Q(m + 1));
    b.add(-unit_vec(n, 0), Q(1, 2), "a0 >= -1/2");
    for (std::size_t r = 1; r < n; ++r) b.add(unit_vec(n, r) - unit_vec(n, 0), Q(1), "a" + idx(r) + "-a0 <= 1");
    const auto others = range_without(n, {0});
    for (std::size_t k = 0; k <= static_cast<std::size_t>(m) + 3; ++k)
        for_each_subset(others, k, [&](const std::vector<std::size_t>& s) { add_subset_bound(b, 0, s); });
    return b.take();
}

std::vector<Inequality> standard_piii(int m) {
    const std::size_t n = 2 * m + 6;
    Builder b(n, Q(m + 1));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            b.add(unit_vec(n, i) + unit_vec(n, j), Q(0), "a" + idx(i) + "+a" + idx(j) + " <= 0");
    const RationalVec triple = unit_vec(n, 0) + unit_vec(n, 1) + unit_vec(n, 2);
    for (std::size_t i = 3; i < n; ++i) b.add(-unit_vec(n, i) - triple, Q(0), "-a" + idx(i) + " <= a0+a1+a2");
    if (m > 0)
        for (std::size_t i = 3; i < n; ++i) b.add(unit_vec(n, i) - triple, Q(1), "a" + idx(i) + "-1 <= a0+a1+a2");
    return b.take();
}

std::vector<Inequality> standard_pext() {
    Builder b(6, Q(1));
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t s = r + 1; s < 6; ++s)
            b.add(unit_vec(6, r) + unit_vec(6, s), Q(1), "a" + idx(r) + "+a" + idx(s) + " <= 1");
    return b.take();
}

// Norm 4 vectors of the E8 lattice with mu.rho = 1, from doubled coordinates.
std::vector<RationalVec> norm4_level1() {
    std::vector<RationalVec> out;
    std::vector<int> a(8);
    auto scan = [&](const std::vector<int>& alphabet) {
        std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int norm, int sum) {
            if (norm > 16) return;
            if (i == 8) {
                if (norm != 16 || sum != 4) return;
                RationalVec v(8);
                for (std::size_t k = 0; k < 8; ++k) v[k] = Q(a[k], 2);
                out.push_back(std::move(v));
                return;
            }
            for (int x : alphabet) {
                a[i] = x;
                rec(i + 1, norm + x * x, sum + x);
            }
        };
        rec(0, 0, 0);
    };
    scan({-4, -2, 0, 2, 4});
    scan({-3, -1, 1, 3});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Inequality> e7_invariant_p() {
    Builder b(8, Q(2));
    for (const auto& d : enumerate_roots(RootSystem::E7)) b.add(d, Q(1), "a.d <= 1, d=" + d.str());
    for (const auto& mu : norm4_level1()) b.add(mu, Q(2), "a.mu <= 2, mu=" + mu.str());
    return b.take();
}

RationalVec subset_vec(std::size_t n, const std::vector<std::size_t>& s) {
    RationalVec v(n);
    for (auto i : s) v[i] = Q(1);
    return v;
}

RationalVec w_vec(std::size_t n, std::size_t i, std::size_t j) {
    return rho_vec(n) - unit_vec(n, i) - unit_vec(n, j);
}

void check_level(const RationalVec& alpha, PolytopeId id, int m) {
    if (alpha.size() != ambient_size(id, m))
        throw std::invalid_argument("polytope: point has " + std::to_string(alpha.size()) + " coordinates, expected " +
                                    std::to_string(ambient_size(id, m)));
    if (alpha.sum() != hyperplane_level(id, m))
        throw std::invalid_argument("polytope: coordinates of " + alpha.str() + " must sum to " +
                                    to_string(hyperplane_level(id, m)));
}

}  // namespace

std::string to_string(PolytopeId id) {
    switch (id) {
        case PolytopeId::P: return "P";
        case PolytopeId::PI: return "PI";
        case PolytopeId::PII: return "PII";
        case PolytopeId::PIII: return "PIII";
        case PolytopeId::Pext: return "Pext";
    }
    return "?";
}

PolytopeId parse_polytope_id(const std::string& s) {
    for (auto id : {PolytopeId::P, PolytopeId::PI, PolytopeId::PII, PolytopeId::PIII, PolytopeId::Pext})
        if (to_string(id) == s) return id;
    throw std::invalid_argument("unknown polytope: " + s);
}

std::pair<RationalVec, Q> Inequality::key(const Q& level) const {
    // Adding lambda*(sum alpha - level) does not change the half-space on the hyperplane.
    const Q shift = mu.sum() / Q(static_cast<std::int64_t>(mu.size()));
    RationalVec k = mu;
    for (std::size_t i = 0; i < k.size(); ++i) k[i] -= shift;
    Q c2 = c - shift * level;
    make_primitive(k, c2);
    return {k, c2};
}

std::size_t ambient_size(PolytopeId id, int m) {
    require_supported(id, m);
    return id == PolytopeId::Pext ? 6 : static_cast<std::size_t>(2 * m + 6);
}

Q hyperplane_level(PolytopeId id, int m) {
    require_supported(id, m);
    return id == PolytopeId::Pext ? Q(1) : Q(m + 1);
}

std::vector<RationalVec> vertices(PolytopeId id, int m) {
    require_supported(id, m);
    const std::size_t n = ambient_size(id, m);
    std::vector<RationalVec> out;
    if (id == PolytopeId::Pext) {
        for (std::size_t j = 0; j < n; ++j) {
            out.push_back(unit_vec(n, j));
            out.push_back(rho_vec(n) - Q(2) * unit_vec(n, j));
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    if (id == PolytopeId::PIII) pool.erase(pool.begin(), pool.begin() + 3);
    if (id == PolytopeId::PII) pool.erase(pool.begin());
    for_each_subset(pool, static_cast<std::size_t>(m) + 1,
                    [&](const std::vector<std::size_t>& s) { out.push_back(subset_vec(n, s)); });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool take = id == PolytopeId::P || (id == PolytopeId::PII && i == 0) ||
                              (id == PolytopeId::PIII && j <= 2);
            if (take) out.push_back(w_vec(n, i, j));
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Inequality> bounding_inequalities(PolytopeId id, int m, InequalityForm form) {
    require_supported(id, m);
    if (form == InequalityForm::E7Invariant) {
        if (id != PolytopeId::P || m != 1)
            throw std::invalid_argument("bounding_inequalities: the E7-invariant form exists for P with m = 1 only");
        static const std::vector<Inequality> e7 = e7_invariant_p();
        return e7;
    }
    switch (id) {
        case PolytopeId::P: return standard_p(m);
        case PolytopeId::PI: return standard_pi(m);
        case PolytopeId::PII: return standard_pii(m);
        case PolytopeId::PIII: return standard_piii(m);
        case PolytopeId::Pext: return standard_pext();
    }
    return {};
}

namespace {

const std::vector<Inequality>& cached_inequalities(PolytopeId id, int m) {
    static std::map<std::pair<int, int>, std::vector<Inequality>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto key = std::make_pair(static_cast<int>(id), m);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, bounding_inequalities(id, m)).first;
    return it->second;
}

const std::vector<RationalVec>& cached_vertices(PolytopeId id, int m) {
    static std::map<std::pair<int, int>, std::vector<RationalVec>> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto key = std::make_pair(static_cast<int>(id), m);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, vertices(id, m)).first;
    return it->second;
}

}  // namespace

RationalVec FaceDescriptor::centroid() const {
    if (vertices.empty()) throw std::logic_error("centroid of an empty face");
    RationalVec c(vertices.front().size());
    for (const auto& v : vertices) c += v;
    c *= Q(1, static_cast<std::int64_t>(vertices.size()));
    return c;
}

int affine_dimension(const std::vector<RationalVec>& pts) {
    if (pts.empty()) return -1;
    std::vector<RationalVec> rows;
    for (std::size_t i = 1; i < pts.size(); ++i) rows.push_back(pts[i] - pts[0]);
    const std::size_t cols = pts[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == Q(0)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == Q(0)) continue;
            const Q f = rows[r][c] / rows[rank][c];
            rows[r] -= f * rows[rank];
        }
        ++rank;
    }
    return rank;
}

FaceDescriptor face_from_vertices(const std::vector<RationalVec>& verts, PolytopeId id, int m) {
    if (verts.empty()) throw std::invalid_argument("face_from_vertices: empty vertex set");
    const auto& ineqs = cached_inequalities(id, m);
    FaceDescriptor f;
    f.polytope = id;
    f.m = m;
    for (std::size_t k = 0; k < ineqs.size(); ++k)
        if (std::all_of(verts.begin(), verts.end(), [&](const RationalVec& v) { return ineqs[k].slack(v) == Q(0); }))
            f.tight.push_back(static_cast<int>(k));
    for (const auto& v : cached_vertices(id, m))
        if (std::all_of(f.tight.begin(), f.tight.end(), [&](int k) { return ineqs[k].slack(v) == Q(0); }))
            f.vertices.push_back(v);
    f.dim = affine_dimension(f.vertices);
    return f;
}

Classification classify_point(const RationalVec& alpha, PolytopeId id, int m) {
    check_level(alpha, id, m);
    const auto& ineqs = cached_inequalities(id, m);
    Classification out;
    std::vector<int> tight;
    for (std::size_t k = 0; k < ineqs.size(); ++k) {
        const Q s = ineqs[k].slack(alpha);
        if (s < Q(0)) out.violated.push_back(ineqs[k]);
        else if (s == Q(0)) tight.push_back(static_cast<int>(k));
    }
    if (!out.violated.empty()) return out;
    FaceDescriptor f;
    f.polytope = id;
    f.m = m;
    f.tight = std::move(tight);
    for (const auto& v : cached_vertices(id, m))
        if (std::all_of(f.tight.begin(), f.tight.end(), [&](int k) { return ineqs[k].slack(v) == Q(0); }))
            f.vertices.push_back(v);
    f.dim = affine_dimension(f.vertices);
    out.face = std::move(f);
    return out;
}

bool in_polytope(const RationalVec& alpha, PolytopeId id, int m) {
    check_level(alpha, id, m);
    const auto& ineqs = cached_inequalities(id, m);
    return std::all_of(ineqs.begin(), ineqs.end(), [&](const Inequality& e) { return e.slack(alpha) >= Q(0); });
}

RationalVec permute(const RationalVec& alpha, const std::vector<int>& sigma) {
    if (sigma.size() != alpha.size()) throw std::invalid_argument("permute: size mismatch");
    RationalVec out(alpha.size());
    for (std::size_t k = 0; k < sigma.size(); ++k) out[k] = alpha[static_cast<std::size_t>(sigma[k])];
    return out;
}

std::vector<Membership> decompose(const RationalVec& alpha, int m) {
    if (!in_polytope(alpha, PolytopeId::P, m)) throw std::invalid_argument("decompose: " + alpha.str() + " lies outside P");
    const int n = 2 * m + 6;
    std::vector<Membership> out;
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    if (in_polytope(alpha, PolytopeId::PI, m)) out.push_back({PolytopeId::PI, id});
    for (int k = 0; k < n; ++k) {
        std::vector<int> sigma{k};
        for (int r = 0; r < n; ++r)
            if (r != k) sigma.push_back(r);
        if (in_polytope(permute(alpha, sigma), PolytopeId::PII, m)) out.push_back({PolytopeId::PII, sigma});
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int l = j + 1; l < n; ++l) {
                std::vector<int> sigma{i, j, l};
                for (int r = 0; r < n; ++r)
                    if (r != i && r != j && r != l) sigma.push_back(r);
                if (in_polytope(permute(alpha, sigma), PolytopeId::PIII, m)) out.push_back({PolytopeId::PIII, sigma});
            }
    if (out.empty()) throw std::logic_error("decompose: no piece contains " + alpha.str());
    return out;
}

}  // namespace ellim
