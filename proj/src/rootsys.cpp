#include "ellim/rootsys.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ellim {

namespace {

constexpr std::size_t kDim = 8;

// Roots are found from doubled coordinates a_i = 2 v_i, so v.v = 2 becomes
// sum a_i^2 = 8, with all a_i even or all odd.  The lattice also needs an even
// coordinate sum (sum a_i = 0 mod 4); without it the half-integer vectors of
// every sign pattern would appear and the set would not be reflection closed.
std::vector<RationalVec> build_e8() {
    std::vector<RationalVec> out;
    auto scan = [&](const std::vector<int>& alphabet) {
        std::array<int, kDim> a{};
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int norm) {
            if (norm > 8) return;
            if (i == kDim) {
                int sum = 0;
                for (int x : a) sum += x;
                if (norm != 8 || ((sum % 4) + 4) % 4 != 0) return;
                RationalVec v(kDim);
                for (std::size_t k = 0; k < kDim; ++k) v[k] = Q(a[k], 2);
                out.push_back(std::move(v));
                return;
            }
            for (int x : alphabet) {
                a[i] = x;
                rec(i + 1, norm + x * x);
            }
        };
        rec(0, 0);
    };
    scan({-4, -2, 0, 2, 4});
    scan({-3, -1, 1, 3});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<RationalVec> filter_rho(const std::vector<RationalVec>& e8, Q level) {
    std::vector<RationalVec> out;
    const RationalVec rho = rho_vec(kDim);
    for (const auto& v : e8)
        if (v.dot(rho) == level) out.push_back(v);
    return out;
}

void require_root(const RationalVec& r) {
    if (r.norm2() != Q(2)) throw std::invalid_argument("reflection vector must have norm 2: " + r.str());
}

cplx int_power(cplx x, std::int64_t k) {
    cplx r = 1.0;
    if (k < 0) {
        x = 1.0 / x;
        k = -k;
    }
    for (std::int64_t i = 0; i < k; ++i) r *= x;
    return r;
}

// Generic functional used to split a root system into positive and negative roots.
Q height(const RationalVec& v) {
    Q h(0);
    std::int64_t w = 1;
    for (std::size_t i = 0; i < v.size(); ++i, w *= 10) h += v[i] * Q(w);
    return h;
}

struct Component {
    char letter;
    int rank;
};

Component identify(const std::vector<std::vector<int>>& adj, const std::vector<int>& nodes) {
    const int n = static_cast<int>(nodes.size());
    std::vector<int> branch;
    for (int v : nodes)
        if (adj[v].size() >= 3) branch.push_back(v);
    if (branch.empty()) return {'A', n};
    if (branch.size() > 1 || adj[branch[0]].size() != 3)
        throw std::invalid_argument("not a finite simply-laced Dynkin diagram");
    std::vector<int> arms;
    for (int start : adj[branch[0]]) {
        int prev = branch[0], cur = start, len = 1;
        while (true) {
            int next = -1;
            for (int x : adj[cur])
                if (x != prev) next = x;
            if (next < 0) break;
            if (adj[cur].size() > 2) throw std::invalid_argument("not a tree-shaped Dynkin diagram");
            prev = cur;
            cur = next;
            ++len;
        }
        arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return {'D', n};
    if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) return {'E', n};
    throw std::invalid_argument("Dynkin diagram is not of finite type");
}

}  // namespace

const std::vector<RationalVec>& enumerate_roots(RootSystem sys) {
    static const std::vector<RationalVec> e8 = build_e8();
    static const std::vector<RationalVec> e7 = filter_rho(e8, Q(0));
    static const std::vector<RationalVec> s = filter_rho(e8, Q(1));
    switch (sys) {
        case RootSystem::E8: return e8;
        case RootSystem::E7: return e7;
        case RootSystem::OrbitS: return s;
    }
    return e8;
}

RationalVec reflect(const RationalVec& root, const RationalVec& v) {
    require_root(root);
    return v - root.dot(v) * root;
}

RationalVec WeylWord::act(const RationalVec& v) const {
    RationalVec r = v;
    for (const auto& a : reflections) r = reflect(a, r);
    return r;
}

WeylWord WeylWord::then(const WeylWord& next) const {
    WeylWord w = *this;
    w.reflections.insert(w.reflections.end(), next.reflections.begin(), next.reflections.end());
    return w;
}

std::string WeylWord::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < reflections.size(); ++i) os << (i ? ";" : "") << reflections[i].str();
    os << ']';
    return os.str();
}

double ParamPoint::balancing_defect() const {
    cplx prod = 1.0;
    for (const auto& x : u) prod *= x;
    const cplx target = std::pow(q, m + 1);
    return std::abs(prod - target) / std::abs(target);
}

ParamPoint canonical_sign(ParamPoint t) {
    if (t.u.empty()) return t;
    const cplx f = t.u.front();
    if (f.imag() < 0.0 || (f.imag() == 0.0 && f.real() < 0.0))
        for (auto& x : t.u) x = -x;
    return t;
}

ParamPoint make_param_point(int m, std::vector<cplx> first, cplx q) {
    const std::size_t n = static_cast<std::size_t>(2 * m + 6);
    if (first.size() != n - 1) throw std::invalid_argument("make_param_point: need 2m+5 free parameters");
    cplx prod = 1.0;
    for (const auto& x : first) {
        if (x == 0.0) throw std::invalid_argument("make_param_point: zero parameter");
        prod *= x;
    }
    first.push_back(std::pow(q, m + 1) / prod);
    return canonical_sign(ParamPoint{m, std::move(first), q});
}

ParamPoint weyl_act_param(const WeylWord& w, const ParamPoint& t, double tol) {
    if (t.m != 1 || t.u.size() != kDim) throw std::invalid_argument("weyl_act_param: requires m = 1");
    if (t.balancing_defect() > tol) throw std::invalid_argument("weyl_act_param: balancing violated");
    const RationalVec rho = rho_vec(kDim);
    ParamPoint r = t;
    for (const auto& a : w.reflections) {
        require_root(a);
        if (a.dot(rho) != Q(0)) throw std::invalid_argument("weyl_act_param: not an E7 root " + a.str());
        if (a.all_integer()) {
            std::size_t i = kDim, j = kDim;
            for (std::size_t k = 0; k < kDim; ++k)
                if (a[k] != Q(0)) (i == kDim ? i : j) = k;
            std::swap(r.u[i], r.u[j]);
        } else {
            cplx prod = 1.0;
            for (std::size_t k = 0; k < kDim; ++k)
                if (a[k] < Q(0)) prod *= r.u[k];
            const cplx s = std::sqrt(prod / r.q);
            for (std::size_t k = 0; k < kDim; ++k) {
                if (a[k] < Q(0)) r.u[k] /= s;
                else r.u[k] *= s;
            }
        }
    }
    return canonical_sign(r);
}

cplx monomial(const ParamPoint& u, const RationalVec& delta) {
    if (delta.size() != u.u.size()) throw std::invalid_argument("monomial: size mismatch");
    if (delta.all_integer()) {
        cplx r = 1.0;
        for (std::size_t k = 0; k < delta.size(); ++k) r *= int_power(u.u[k], delta[k].numerator());
        return r;
    }
    if (!delta.all_half_integer() || u.m != 1)
        throw std::invalid_argument("monomial: exponent must lie in the E8 lattice with m = 1");
    const RationalVec shifted = delta - rho_vec(delta.size());
    cplx r = u.q;
    for (std::size_t k = 0; k < delta.size(); ++k) r *= int_power(u.u[k], shifted[k].numerator());
    return r;
}

std::vector<RationalVec> stabilizer_roots(const std::vector<RationalVec>& fix) {
    std::vector<RationalVec> out;
    for (const auto& r : enumerate_roots(RootSystem::E7)) {
        bool ok = true;
        for (const auto& v : fix)
            if (r.dot(v) != Q(0)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(r);
    }
    return out;
}

std::vector<RationalVec> simple_roots(const std::vector<RationalVec>& roots) {
    std::set<RationalVec> all(roots.begin(), roots.end());
    std::vector<RationalVec> pos;
    for (const auto& r : roots) {
        const Q h = height(r);
        if (h == Q(0)) throw std::invalid_argument("simple_roots: functional not generic");
        if (h > Q(0)) pos.push_back(r);
    }
    std::vector<RationalVec> simple;
    for (const auto& a : pos) {
        bool decomposable = false;
        for (const auto& b : pos) {
            if (a == b) continue;
            const RationalVec d = a - b;
            if (height(d) > Q(0) && all.count(d)) {
                decomposable = true;
                break;
            }
        }
        if (!decomposable) simple.push_back(a);
    }
    return simple;
}

std::string coxeter_type(const std::vector<RationalVec>& roots) {
    if (roots.empty()) return "1";
    std::set<RationalVec> all(roots.begin(), roots.end());
    for (const auto& a : roots) {
        require_root(a);
        for (const auto& b : roots)
            if (!all.count(reflect(a, b))) throw std::invalid_argument("coxeter_type: not a closed root subsystem");
    }
    const auto simple = simple_roots(roots);
    const std::size_t n = simple.size();
    std::vector<std::vector<int>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Q d = simple[i].dot(simple[j]);
            if (d == Q(0)) continue;
            if (d != Q(-1)) throw std::invalid_argument("coxeter_type: unexpected Cartan entry");
            adj[i].push_back(static_cast<int>(j));
            adj[j].push_back(static_cast<int>(i));
        }
    std::vector<int> seen(n, 0);
    std::vector<Component> comps;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<int> nodes, stack{static_cast<int>(s)};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            nodes.push_back(v);
            for (int x : adj[v])
                if (!seen[x]) {
                    seen[x] = 1;
                    stack.push_back(x);
                }
        }
        comps.push_back(identify(adj, nodes));
    }
    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.letter > b.letter;
    });
    std::string out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (i) out += "x";
        out += comps[i].letter;
        out += std::to_string(comps[i].rank);
    }
    return out;
}

std::uint64_t coxeter_order(const std::string& type) {
    if (type == "1") return 1;
    std::uint64_t order = 1;
    std::istringstream is(type);
    std::string part;
    while (std::getline(is, part, 'x')) {
        if (part.size() < 2) throw std::invalid_argument("bad type string: " + type);
        const int n = std::stoi(part.substr(1));
        std::uint64_t f = 1;
        switch (part[0]) {
            case 'A':
                for (int k = 2; k <= n + 1; ++k) f *= k;
                break;
            case 'D':
                for (int k = 2; k <= n; ++k) f *= k;
                f <<= (n - 1);
                break;
            case 'E':
                f = n == 6 ? 51840ULL : n == 7 ? 2903040ULL : n == 8 ? 696729600ULL : 0;
                if (!f) throw std::invalid_argument("bad type string: " + type);
                break;
            default: throw std::invalid_argument("bad type string: " + type);
        }
        order *= f;
    }
    return order;
}

}  // namespace ellim
