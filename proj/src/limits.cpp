#include "ellim/limits.hpp"

#include "ellim/face_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ellim {

namespace {

// q^qpow * prod_k v_k^{e_k}; slot e.size()-1 is the auxiliary parameter w.
struct Mono {
    std::vector<int> e;
    int qpow = 0;
};

Mono one_mono(std::size_t n) { return Mono{std::vector<int>(n + 1, 0), 0}; }

Mono unit(std::size_t n, std::size_t k) {
    Mono m = one_mono(n);
    m.e[k] = 1;
    return m;
}

Mono operator*(Mono a, const Mono& b) {
    for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] += b.e[i];
    a.qpow += b.qpow;
    return a;
}

Mono operator/(Mono a, const Mono& b) {
    for (std::size_t i = 0; i < a.e.size(); ++i) a.e[i] -= b.e[i];
    a.qpow -= b.qpow;
    return a;
}

Mono pow_mono(Mono a, int k) {
    for (auto& x : a.e) x *= k;
    a.qpow *= k;
    return a;
}

Mono qmono(std::size_t n, int k = 1) {
    Mono m = one_mono(n);
    m.qpow = k;
    return m;
}

cplx ipow(cplx x, int k) {
    cplx r = 1.0;
    if (k < 0) {
        x = 1.0 / x;
        k = -k;
    }
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

cplx value(const Mono& m, const std::vector<cplx>& v, cplx q) {
    cplx r = ipow(q, m.qpow);
    for (std::size_t k = 0; k < m.e.size(); ++k)
        if (m.e[k]) r *= ipow(v[k], m.e[k]);
    return r;
}

struct SymFactor {
    ZFactor::Kind kind;
    Mono c;
    int k;
    int power;
};

struct SymTerm {
    enum class Kind { Product, Integral, Series, VWP };
    Kind kind = Kind::Product;
    int qq_power = 0;  // power of (q;q)
    double scalar = 1.0;
    std::vector<Mono> num, den;  // prefactor q-shifted factorials (x;q)
    std::vector<SymFactor> factors;
    std::vector<Mono> upper, lower;  // phi series, or the b list for VWP
    Mono a;                          // VWP base parameter
    Mono z;
    int n = 0;
};

struct SymFormula {
    std::size_t n = 0;  // number of roles
    std::vector<SymTerm> terms;
};

bool is_zero(const Q& x) { return x == Q(0); }

// Limit as p -> 0 of Gamma(p^gamma c z^k; p, q).
void gamma_limit(std::vector<SymFactor>& out, const Mono& c, int k, const Q& gamma, std::size_t n) {
    if (gamma < Q(0) || gamma > Q(1)) throw std::logic_error("gamma_limit: exponent outside [0,1]");
    if (gamma == Q(0)) out.push_back({ZFactor::Kind::Poch, c, k, -1});
    else if (gamma == Q(1)) out.push_back({ZFactor::Kind::Poch, qmono(n) / c, -k, 1});
}

// Limit of theta(z^{-2} p^{-2 beta}; p) for -1/2 <= beta <= 0.
void theta_p_limit(std::vector<SymFactor>& out, const Q& beta, std::size_t n) {
    if (beta == Q(0)) out.push_back({ZFactor::Kind::Linear, one_mono(n), -2, 1});
    else if (beta == Q(-1, 2)) out.push_back({ZFactor::Kind::Linear, one_mono(n), 2, 1});
}

SymFormula build_trivial(const RationalVec& a) {
    const std::size_t n = a.size();
    SymTerm t;
    t.kind = SymTerm::Kind::Integral;
    t.qq_power = 1;
    t.scalar = 0.5;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = r + 1; s < n; ++s)
            if (is_zero(a[r]) && is_zero(a[s])) t.num.push_back(unit(n, r) * unit(n, s));
    t.factors.push_back({ZFactor::Kind::Poch, one_mono(n), 2, 1});
    t.factors.push_back({ZFactor::Kind::Poch, one_mono(n), -2, 1});
    for (std::size_t r = 0; r < n; ++r) {
        gamma_limit(t.factors, unit(n, r), 1, a[r], n);
        gamma_limit(t.factors, unit(n, r), -1, a[r], n);
    }
    return {n, {t}};
}

SymFormula build_symbroken(const RationalVec& a) {
    const std::size_t n = a.size();
    const Q beta = a[0] + a[1] + a[2];
    SymTerm t;
    t.kind = SymTerm::Kind::Integral;
    t.qq_power = 1;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = r + 1; s < 3; ++s) {
            if (a[r] + a[s] == Q(-1)) t.num.push_back(unit(n, r) * unit(n, s));
            if (a[r] + a[s] == Q(0)) t.den.push_back(qmono(n) / (unit(n, r) * unit(n, s)));
        }
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 3; s < n; ++s)
            if (a[r] == beta && a[s] == -beta) t.num.push_back(unit(n, r) * unit(n, s));
    if (beta == Q(0))
        for (std::size_t r = 3; r < n; ++r)
            for (std::size_t s = r + 1; s < n; ++s)
                if (a[r] + a[s] == Q(0)) t.num.push_back(unit(n, r) * unit(n, s));
    theta_p_limit(t.factors, beta, n);
    t.factors.push_back({ZFactor::Kind::Theta, unit(n, 0) * unit(n, 1) * unit(n, 2), -1, 1});
    for (std::size_t r = 0; r < 3; ++r) {
        gamma_limit(t.factors, unit(n, r), -1, a[r] - beta, n);
        gamma_limit(t.factors, unit(n, r), 1, Q(1) + a[r] + beta, n);
    }
    for (std::size_t r = 3; r < n; ++r) {
        gamma_limit(t.factors, unit(n, r), 1, a[r] + beta, n);
        gamma_limit(t.factors, unit(n, r), -1, a[r] - beta, n);
    }
    return {n, {t}};
}

// Roles 0 and 1 carry the two smallest (equal) exponents; slot n is w.
SymFormula build_sum_integral(const RationalVec& a) {
    const std::size_t n = a.size();
    const Q a0 = a[0];
    const Mono w = unit(n, n);
    SymTerm t;
    t.kind = SymTerm::Kind::Integral;
    t.qq_power = 1;
    if (Q(1) + a[0] + a[1] == Q(0)) t.num.push_back(unit(n, 0) * unit(n, 1));
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t s = 2; s < n; ++s)
            if (a[r] + a[s] == Q(0)) t.num.push_back(unit(n, r) * unit(n, s));
    for (std::size_t r = 2; r < n; ++r)
        for (std::size_t s = r + 1; s < n; ++s)
            if (a[r] + a[s] == Q(0)) t.num.push_back(unit(n, r) * unit(n, s));
    theta_p_limit(t.factors, a0, n);
    t.factors.push_back({ZFactor::Kind::Theta, unit(n, 0) * unit(n, 1) * w, -1, 1});
    t.factors.push_back({ZFactor::Kind::Theta, w, 1, 1});
    t.factors.push_back({ZFactor::Kind::Theta, unit(n, 0) * w, 0, -1});
    t.factors.push_back({ZFactor::Kind::Theta, unit(n, 1) * w, 0, -1});
    for (std::size_t r = 0; r < 2; ++r) {
        gamma_limit(t.factors, unit(n, r), -1, a[r] - a0, n);
        gamma_limit(t.factors, unit(n, r), 1, Q(1) + a[r] + a0, n);
    }
    for (std::size_t r = 2; r < n; ++r) {
        gamma_limit(t.factors, unit(n, r), 1, a[r] + a0, n);
        gamma_limit(t.factors, unit(n, r), -1, a[r] - a0, n);
    }
    return {n, {t}};
}

// Pairs 1 <= r < s with a_r + a_s = 0; their (u_r u_s; q) factors accompany
// the single-series forms whenever such a pair occurs.
void add_zero_pairs(SymTerm& t, const RationalVec& a) {
    const std::size_t n = a.size();
    for (std::size_t r = 1; r < n; ++r)
        for (std::size_t s = r + 1; s < n; ++s)
            if (a[r] + a[s] == Q(0)) t.num.push_back(unit(n, r) * unit(n, s));
}

// Series forms on the second piece; a is sorted with a[0] < 0 minimal.
SymFormula build_series(const RationalVec& a, FormulaVariant& variant) {
    const std::size_t n = a.size();
    const Q a0 = a[0];
    const Mono q = qmono(n);
    auto e = [&](std::size_t k) { return unit(n, k); };
    SymFormula f{n, {}};
    if (a0 == Q(-1, 2) && a[1] == Q(-1, 2)) {
        variant = FormulaVariant::PairedVWP;
        for (auto [x, y] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 0}}) {
            SymTerm t;
            t.kind = SymTerm::Kind::VWP;
            for (std::size_t r = 2; r < n; ++r) {
                t.num.push_back(e(r) * e(y));
                t.num.push_back(q * e(x) / e(r));
            }
            t.den = {q * pow_mono(e(x), 2), e(y) / e(x)};
            t.a = pow_mono(e(x), 2);
            for (std::size_t r = 0; r < n; ++r)
                if (r != x) t.upper.push_back(e(x) * e(r));
            t.z = q;
            t.n = 0;
            f.terms.push_back(t);
        }
        return f;
    }
    if (a0 == Q(-1, 2)) {
        variant = FormulaVariant::SingleVWP;
        SymTerm t;
        t.kind = SymTerm::Kind::VWP;
        int below = 0;
        for (std::size_t r = 0; r < n; ++r)
            if (a[r] < Q(1, 2)) ++below;
        t.n = below - 3;
        t.den = {q * pow_mono(e(0), 2)};
        t.a = pow_mono(e(0), 2);
        t.z = pow_mono(e(0), t.n);
        for (std::size_t r = 1; r < n; ++r) {
            if (a[r] == Q(1, 2)) {
                t.num.push_back(q * e(0) / e(r));
                t.upper.push_back(e(0) * e(r));
            } else {
                t.z = t.z * e(r);
            }
        }
        add_zero_pairs(t, a);
        f.terms.push_back(t);
        return f;
    }
    std::vector<std::size_t> up, lo;  // a_r = -a0, a_r = 1 + a0
    for (std::size_t r = 1; r < n; ++r) {
        if (a[r] == -a0) up.push_back(r);
        if (a[r] == Q(1) + a0) lo.push_back(r);
    }
    if (a[1] == a0) {
        variant = FormulaVariant::PairedPhi;
        for (auto [x, y] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 0}}) {
            SymTerm t;
            t.kind = SymTerm::Kind::Series;
            for (auto r : up) t.num.push_back(e(y) * e(r));
            for (auto r : lo) t.num.push_back(q * e(x) / e(r));
            t.den = {e(y) / e(x)};
            for (auto r : up) t.upper.push_back(e(x) * e(r));
            t.lower.push_back(q * e(x) / e(y));
            for (auto r : lo) t.lower.push_back(q * e(x) / e(r));
            t.z = q;
            t.n = static_cast<int>(up.size()) - static_cast<int>(lo.size()) - 2;
            f.terms.push_back(t);
        }
        return f;
    }
    Q neg_sum(0);
    int below = 0;
    for (std::size_t r = 1; r < n; ++r)
        if (a[r] + a0 < Q(0)) neg_sum += a[r] + a0;
    for (std::size_t r = 0; r < n; ++r)
        if (a[r] < -a0) ++below;
    SymTerm t;
    for (auto r : lo) t.num.push_back(q * e(0) / e(r));
    if (Q(2) * a0 < neg_sum) {
        variant = FormulaVariant::ProductOnly;
        t.kind = SymTerm::Kind::Product;
        f.terms.push_back(t);
        return f;
    }
    if (Q(2) * a0 != neg_sum) throw std::logic_error("build_series: point outside the second piece");
    variant = FormulaVariant::SinglePhi;
    t.kind = SymTerm::Kind::Series;
    add_zero_pairs(t, a);
    for (auto r : up) t.upper.push_back(e(0) * e(r));
    for (auto r : lo) t.lower.push_back(q * e(0) / e(r));
    t.z = pow_mono(e(0), -2);
    for (std::size_t r = 1; r < n; ++r)
        if (a[r] < -a0) t.z = t.z * e(0) * e(r);
    t.n = below - 4 - static_cast<int>(lo.size()) + static_cast<int>(up.size());
    f.terms.push_back(t);
    return f;
}

SymFormula build_product(std::size_t n, const std::vector<Mono>& num) {
    SymTerm t;
    t.kind = SymTerm::Kind::Product;
    t.num = num;
    return {n, {t}};
}

bool is_quadruple(const Inequality& e) {
    if (e.c != Q(0)) return false;
    int neg = 0;
    for (std::size_t i = 0; i < e.mu.size(); ++i) {
        if (e.mu[i] == Q(-1)) ++neg;
        else if (e.mu[i] != Q(0)) return false;
    }
    return neg == 4;
}

std::vector<int> sorted_by_alpha(const RationalVec& alpha, std::vector<int> idx) {
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
        if (alpha[x] != alpha[y]) return alpha[x] < alpha[y];
        return x < y;
    });
    return idx;
}

std::vector<int> roles_second(const RationalVec& alpha, const std::vector<int>& sigma) {
    std::vector<int> rest(sigma.begin() + 1, sigma.end());
    std::vector<int> roles{sigma[0]};
    for (int r : sorted_by_alpha(alpha, rest)) roles.push_back(r);
    return roles;
}

std::vector<int> roles_third(const RationalVec& alpha, const std::vector<int>& sigma) {
    std::vector<int> roles = sorted_by_alpha(alpha, {sigma[0], sigma[1], sigma[2]});
    for (int r : sorted_by_alpha(alpha, std::vector<int>(sigma.begin() + 3, sigma.end()))) roles.push_back(r);
    return roles;
}

std::vector<int> identity_roles(std::size_t n) {
    std::vector<int> r(n);
    std::iota(r.begin(), r.end(), 0);
    return r;
}

// Roles for the w-integral: the two smallest exponents first.
std::optional<std::vector<int>> roles_sum_integral(const RationalVec& alpha, int m) {
    const auto roles = sorted_by_alpha(alpha, identity_roles(alpha.size()));
    const RationalVec a = permute(alpha, roles);
    (void)m;
    if (!(a[0] >= Q(-1, 2) && a[0] == a[1] && a[0] < Q(0))) return std::nullopt;
    if (a[2] < -a[0] || a[a.size() - 1] > Q(1) + a[0]) return std::nullopt;
    return roles;
}

// --- family tags -----------------------------------------------------------

int rank_of(const std::vector<std::vector<int>>& rows) {
    std::vector<RationalVec> pts{RationalVec(rows.empty() ? 0 : rows[0].size())};
    for (const auto& r : rows) {
        RationalVec v(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) v[i] = Q(r[i]);
        pts.push_back(v);
    }
    return affine_dimension(pts);
}

// The balancing relation prod u = q^{m+1} is expressible through the parameters.
bool balancing_in_span(const std::vector<Mono>& params, std::size_t n) {
    std::vector<std::vector<int>> rows;
    for (const auto& p : params) rows.emplace_back(p.e.begin(), p.e.begin() + static_cast<long>(n));
    if (rows.empty()) return false;
    const int r0 = rank_of(rows);
    rows.emplace_back(n, 1);
    return rank_of(rows) == r0;
}

std::string decorate(bool at_q, bool balanced) {
    std::string d = std::string(at_q ? "q" : "") + (balanced ? "b" : "");
    return d.empty() ? "" : "(" + d + ")";
}

std::string superscript(int n) { return n == 0 ? "" : "^(" + std::to_string(n) + ")"; }

std::string integral_tag(const SymFormula& f, const std::string& name, bool hat_allowed_b) {
    const SymTerm& t = f.terms.front();
    std::vector<Mono> params;
    std::set<std::size_t> num_idx, den_idx;
    int a = 0, b = 0;
    for (const auto& x : t.factors) {
        if (x.kind != ZFactor::Kind::Poch || x.k == 2 || x.k == -2) {
            if (x.kind == ZFactor::Kind::Theta) params.push_back(x.c);
            continue;
        }
        params.push_back(x.c);
        for (std::size_t k = 0; k < f.n; ++k)
            if (x.c.e[k]) (x.power < 0 ? den_idx : num_idx).insert(k);
    }
    for (const auto& x : t.factors)
        if (x.kind == ZFactor::Kind::Poch && x.k != 2 && x.k != -2 && (x.k == 1 || name == "NR")) {
            if (x.power < 0) ++a;
            else ++b;
        }
    const bool disjoint = std::none_of(num_idx.begin(), num_idx.end(), [&](std::size_t k) { return den_idx.count(k); });
    const bool bal = balancing_in_span(params, f.n) && disjoint && hat_allowed_b;
    if (name == "NR") return "NR_" + std::to_string(a / 2) + "^" + std::to_string(b / 2) + decorate(false, bal);
    return name + "_" + std::to_string(a) + "^" + std::to_string(b) + decorate(false, bal);
}

std::string series_tag(const SymFormula& f, FormulaVariant v) {
    const SymTerm& t = f.terms.front();
    const bool at_q = t.z.qpow == 1 && std::all_of(t.z.e.begin(), t.z.e.end(), [](int x) { return x == 0; });
    std::vector<Mono> params = t.upper;
    params.insert(params.end(), t.lower.begin(), t.lower.end());
    if (t.kind == SymTerm::Kind::VWP) params.push_back(t.a);
    if (!at_q) params.push_back(t.z);
    const bool bal = balancing_in_span(params, f.n);
    const bool paired = v == FormulaVariant::PairedPhi || v == FormulaVariant::PairedVWP;
    std::string name;
    if (t.kind == SymTerm::Kind::VWP) {
        const std::size_t r = t.upper.size() + 3;
        name = std::to_string(r) + "W" + std::to_string(r - 1);
    } else {
        name = std::to_string(t.upper.size()) + "phi" + std::to_string(t.lower.size());
    }
    return name + superscript(t.n) + decorate(at_q, bal) + (paired ? "+''" : "");
}

std::string make_tag(const SymFormula& f, FormulaVariant v, FormulaSource src, const RationalVec& a) {
    switch (src) {
        case FormulaSource::Interior: return "1";
        case FormulaSource::QuadrupleFacet: return "product";
        case FormulaSource::PieceI: return integral_tag(f, "NR", true);
        case FormulaSource::PieceIII: {
            const bool hat = a[0] + a[1] + a[2] == Q(-1, 2);
            return integral_tag(f, hat ? "SBhat" : "SB", !hat);
        }
        case FormulaSource::SumIntegral: return "w-integral";
        case FormulaSource::PieceII:
            if (v != FormulaVariant::ProductOnly) return series_tag(f, v);
            return f.terms.front().num.empty() && f.terms.front().den.empty() ? "1" : "product";
    }
    return "?";
}

FormulaVariant symbroken_variant(const RationalVec& a) {
    if (a[0] == a[1] && a[1] == -a[2]) return FormulaVariant::SymBroken1;
    if (a[0] < a[1] && a[1] == -a[2]) return FormulaVariant::SymBroken2;
    return FormulaVariant::SymBroken3;
}

SymFormula build(const LimitFormula& f, FormulaVariant* variant = nullptr) {
    const std::size_t n = f.alpha.size();
    FormulaVariant v = f.variant;
    SymFormula out;
    switch (f.source) {
        case FormulaSource::Interior: out = build_product(n, {}); break;
        case FormulaSource::QuadrupleFacet: out = build_product(n, {unit(n, 0) * unit(n, 1) * unit(n, 2) * unit(n, 3)}); break;
        case FormulaSource::PieceI: out = build_trivial(f.alpha); break;
        case FormulaSource::PieceIII: out = build_symbroken(f.alpha); break;
        case FormulaSource::SumIntegral: out = build_sum_integral(f.alpha); break;
        case FormulaSource::PieceII: out = build_series(f.alpha, v); break;
    }
    if (variant) *variant = v;
    return out;
}

LimitFormula make_formula(FormulaSource src, const RationalVec& alpha, std::vector<int> roles, int m) {
    LimitFormula f;
    f.source = src;
    f.m = m;
    f.alpha = permute(alpha, roles);
    f.roles = std::move(roles);
    switch (src) {
        case FormulaSource::Interior: f.variant = FormulaVariant::One; break;
        case FormulaSource::QuadrupleFacet: f.variant = FormulaVariant::ProductOnly; break;
        case FormulaSource::PieceI: f.variant = FormulaVariant::TrivialIntegral; break;
        case FormulaSource::PieceIII: f.variant = symbroken_variant(f.alpha); break;
        case FormulaSource::SumIntegral: f.variant = FormulaVariant::SumIntegralW; break;
        case FormulaSource::PieceII: break;
    }
    FormulaVariant v = f.variant;
    const SymFormula sym = build(f, &v);
    f.variant = v;
    f.tag = make_tag(sym, v, src, f.alpha);
    const auto& a = f.alpha;
    if (src == FormulaSource::PieceI || src == FormulaSource::PieceIII || src == FormulaSource::SumIntegral)
        f.constraints.push_back("contour separates the downward and upward pole sequences");
    if (src == FormulaSource::PieceII && (v == FormulaVariant::SingleVWP || v == FormulaVariant::SinglePhi)) {
        const SymTerm& t = sym.terms.front();
        const int conf = t.n + static_cast<int>(t.lower.size()) + 1 - static_cast<int>(t.upper.size()) -
                         (v == FormulaVariant::SingleVWP ? 0 : 0);
        const bool zero_conf = v == FormulaVariant::SingleVWP ? t.n == 0 : conf == 0;
        if (zero_conf && a[1] + a[2] == Q(0))
            f.constraints.push_back("|u" + std::to_string(f.roles[1]) + " u" + std::to_string(f.roles[2]) + "| < 1");
    }
    return f;
}

std::vector<cplx> role_values(const LimitFormula& f, const ParamPoint& u, cplx w) {
    if (u.u.size() != f.roles.size()) throw std::invalid_argument("evaluate: parameter count does not match");
    std::vector<cplx> v(f.roles.size() + 1);
    for (std::size_t k = 0; k < f.roles.size(); ++k) v[k] = u.u[static_cast<std::size_t>(f.roles[k])];
    v.back() = w;
    return v;
}

ContourIntegral realize(const SymTerm& t, const std::vector<cplx>& v, cplx q) {
    ContourIntegral I;
    for (const auto& x : t.factors) I.factors.push_back({x.kind, value(x.c, v, q), x.k, x.power});
    return I;
}

QSeriesTolerances<double> series_tol(const LimitOptions& opt) {
    QSeriesTolerances<double> tol;
    tol.cap = opt.series_cap;
    return tol;
}

cplx evaluate_sym(const SymFormula& sym, const std::vector<cplx>& v, cplx q, const LimitOptions& opt) {
    cplx total = 0.0;
    const cplx qq = qpoch_inf(q, q);
    for (const auto& t : sym.terms) {
        cplx pre = t.scalar * ipow(qq, t.qq_power);
        for (const auto& x : t.num) pre *= qpoch_inf(value(x, v, q), q);
        for (const auto& x : t.den) {
            const cplx d = qpoch_inf(value(x, v, q), q);
            if (d == 0.0) throw PoleError("limit formula: vanishing denominator");
            pre /= d;
        }
        cplx body = 1.0;
        try {
            switch (t.kind) {
                case SymTerm::Kind::Product: break;
                case SymTerm::Kind::Integral: body = evaluate_integral(realize(t, v, q), q, opt); break;
                case SymTerm::Kind::Series: {
                    SeriesParams<double> sp;
                    for (const auto& x : t.upper) sp.upper.push_back(value(x, v, q));
                    for (const auto& x : t.lower) sp.lower.push_back(value(x, v, q));
                    sp.n = t.n;
                    sp.q = q;
                    sp.z = value(t.z, v, q);
                    body = phi_series(sp, series_tol(opt));
                    break;
                }
                case SymTerm::Kind::VWP: {
                    VWPParams<double> wp;
                    wp.a = value(t.a, v, q);
                    for (const auto& x : t.upper) wp.b.push_back(value(x, v, q));
                    wp.n = t.n;
                    wp.q = q;
                    wp.z = value(t.z, v, q);
                    body = vwp_series(wp, series_tol(opt));
                    break;
                }
            }
        } catch (const DivergenceError& e) {
            throw ConstraintError(std::string("series outside its convergence domain: ") + e.what());
        }
        total += pre * body;
    }
    return total;
}

void require_in_p(const RationalVec& alpha, int m) {
    if (!in_polytope(alpha, PolytopeId::P, m))
        throw std::invalid_argument("limit formula: " + alpha.str() + " lies outside P");
}

bool vertices_in(const std::vector<RationalVec>& verts, PolytopeId id, int m, const std::vector<int>& sigma) {
    return std::all_of(verts.begin(), verts.end(),
                       [&](const RationalVec& v) { return in_polytope(permute(v, sigma), id, m); });
}

}  // namespace

std::string to_string(FormulaVariant v) {
    switch (v) {
        case FormulaVariant::TrivialIntegral: return "TrivialIntegral";
        case FormulaVariant::SymBroken1: return "SymBroken1";
        case FormulaVariant::SymBroken2: return "SymBroken2";
        case FormulaVariant::SymBroken3: return "SymBroken3";
        case FormulaVariant::SumIntegralW: return "SumIntegralW";
        case FormulaVariant::PairedVWP: return "PairedVWP";
        case FormulaVariant::SingleVWP: return "SingleVWP";
        case FormulaVariant::PairedPhi: return "PairedPhi";
        case FormulaVariant::SinglePhi: return "SinglePhi";
        case FormulaVariant::ProductOnly: return "ProductOnly";
        case FormulaVariant::One: return "One";
    }
    return "?";
}

std::string to_string(ConvergenceReport::Verdict v) {
    switch (v) {
        case ConvergenceReport::Verdict::Converging: return "converging";
        case ConvergenceReport::Verdict::Inconclusive: return "inconclusive";
        case ConvergenceReport::Verdict::Failed: return "failed";
    }
    return "?";
}

std::pair<double, double> pole_window(const ContourIntegral& I) {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (const auto& f : I.factors) {
        if (f.kind != ZFactor::Kind::Poch || f.power > 0) continue;
        if (f.k == -1) lo = std::max(lo, std::abs(f.c));
        else if (f.k == 1) hi = std::min(hi, 1.0 / std::abs(f.c));
        else throw std::logic_error("pole_window: unsupported denominator");
    }
    return {lo, hi};
}

cplx evaluate_integrand(const ContourIntegral& I, cplx z, cplx q) {
    cplx r = 1.0;
    for (const auto& f : I.factors) {
        const cplx x = f.c * ipow(z, f.k);
        cplx val;
        switch (f.kind) {
            case ZFactor::Kind::Poch: val = qpoch_inf(x, q); break;
            case ZFactor::Kind::Theta: val = theta(x, q); break;
            case ZFactor::Kind::Linear: val = 1.0 - x; break;
        }
        r = f.power > 0 ? r * val : r / val;
    }
    return r;
}

cplx evaluate_integral(const ContourIntegral& I, cplx q, const LimitOptions& opt) {
    const auto [lo, hi] = pole_window(I);
    const double g = opt.pole_gap;
    if (!(lo * g * g < hi)) {
        std::ostringstream os;
        os << "no circle separates the pole sequences (downward up to " << lo << ", upward from " << hi << ")";
        throw ContourError(os.str());
    }
    double radius;
    if (lo * g <= 1.0 && 1.0 <= hi / g) radius = 1.0;
    else if (lo == 0.0) radius = hi / (g * g);
    else if (std::isinf(hi)) radius = lo * g * g;
    else radius = std::sqrt(lo * hi);
    const QuadratureResult res = circle_trapezoid([&](cplx z) { return evaluate_integrand(I, z, q); }, radius, opt.quad);
    if (!res.converged) throw QuadratureError("limit integral: quadrature did not converge");
    if (std::abs(res.value) * opt.max_cancellation < res.l1_mean) {
        std::ostringstream os;
        os << "limit integral: cancellation, mean |integrand| " << res.l1_mean << " against value " << std::abs(res.value);
        throw QuadratureError(os.str());
    }
    return I.prefactor * res.value;
}

std::vector<LimitFormula> applicable_formulas(const RationalVec& alpha, int m) {
    require_in_p(alpha, m);
    const std::size_t n = alpha.size();
    std::vector<LimitFormula> out;
    const Classification cls = classify_point(alpha, PolytopeId::P, m);
    const auto& face = *cls.face;
    if (face.interior()) {
        out.push_back(make_formula(FormulaSource::Interior, alpha, identity_roles(n), m));
    } else if (face.tight.size() == 1) {
        const auto ineqs = bounding_inequalities(PolytopeId::P, m);
        const Inequality& e = ineqs[static_cast<std::size_t>(face.tight.front())];
        if (is_quadruple(e)) {
            std::vector<int> roles, rest;
            for (std::size_t i = 0; i < n; ++i) (e.mu[i] != Q(0) ? roles : rest).push_back(static_cast<int>(i));
            roles.insert(roles.end(), rest.begin(), rest.end());
            out.push_back(make_formula(FormulaSource::QuadrupleFacet, alpha, roles, m));
        }
    }
    std::set<std::pair<int, std::vector<int>>> seen;
    auto add = [&](FormulaSource src, std::vector<int> roles) {
        if (seen.insert({static_cast<int>(src), roles}).second) out.push_back(make_formula(src, alpha, std::move(roles), m));
    };
    const auto members = decompose(alpha, m);
    for (const auto& mem : members)
        if (mem.kind == PolytopeId::PI) add(FormulaSource::PieceI, identity_roles(n));
    for (const auto& mem : members)
        if (mem.kind == PolytopeId::PIII) add(FormulaSource::PieceIII, roles_third(alpha, mem.sigma));
    for (const auto& mem : members)
        if (mem.kind == PolytopeId::PII && alpha[static_cast<std::size_t>(mem.sigma[0])] < Q(0))
            add(FormulaSource::PieceII, roles_second(alpha, mem.sigma));
    if (auto roles = roles_sum_integral(alpha, m)) add(FormulaSource::SumIntegral, *roles);
    if (out.empty()) throw std::logic_error("applicable_formulas: no formula covers " + alpha.str());
    return out;
}

LimitFormula formula_for_point(const RationalVec& alpha, int m) { return applicable_formulas(alpha, m).front(); }

LimitFormula formula_for_face(const FaceDescriptor& face) {
    if (face.polytope != PolytopeId::P) throw std::invalid_argument("formula_for_face: face of P expected");
    const int m = face.m;
    const RationalVec c = face.centroid();
    const std::size_t n = c.size();
    const auto all = applicable_formulas(c, m);
    const FormulaSource first = all.front().source;
    if (first == FormulaSource::Interior || first == FormulaSource::QuadrupleFacet) return all.front();
    const auto id = identity_roles(n);
    if (vertices_in(face.vertices, PolytopeId::PI, m, id)) return make_formula(FormulaSource::PieceI, c, id, m);
    for (const auto& mem : decompose(c, m))
        if (mem.kind == PolytopeId::PII && c[static_cast<std::size_t>(mem.sigma[0])] < Q(0) &&
            vertices_in(face.vertices, PolytopeId::PII, m, mem.sigma))
            return make_formula(FormulaSource::PieceII, c, roles_second(c, mem.sigma), m);
    for (const auto& mem : decompose(c, m))
        if (mem.kind == PolytopeId::PIII && vertices_in(face.vertices, PolytopeId::PIII, m, mem.sigma))
            return make_formula(FormulaSource::PieceIII, c, roles_third(c, mem.sigma), m);
    return all.front();
}

LimitFormula formula_for_piece(PolytopeId piece, const RationalVec& alpha, int m, const std::vector<int>& sigma) {
    if (!in_polytope(permute(alpha, sigma), piece, m))
        throw std::invalid_argument("formula_for_piece: point outside the permuted piece");
    switch (piece) {
        case PolytopeId::PI: return make_formula(FormulaSource::PieceI, alpha, identity_roles(alpha.size()), m);
        case PolytopeId::PII:
            if (alpha[static_cast<std::size_t>(sigma[0])] >= Q(0))
                throw std::invalid_argument("formula_for_piece: the series forms need a negative leading exponent");
            return make_formula(FormulaSource::PieceII, alpha, roles_second(alpha, sigma), m);
        case PolytopeId::PIII: return make_formula(FormulaSource::PieceIII, alpha, roles_third(alpha, sigma), m);
        default: throw std::invalid_argument("formula_for_piece: PI, PII or PIII expected");
    }
}

std::string family_tag(const FaceDescriptor& face) { return formula_for_face(face).tag; }

cplx evaluate(const LimitFormula& f, const ParamPoint& u, const LimitOptions& opt) {
    if (u.balancing_defect() > 1e-9) throw std::invalid_argument("evaluate: parameters violate prod u = q^{m+1}");
    cplx w = 0.0;
    if (f.source == FormulaSource::SumIntegral) w = std::polar(0.83, 0.61);
    const SymFormula sym = build(f);
    return evaluate_sym(sym, role_values(f, u, w), u.q, opt);
}

// Formulas are tried in dispatch order; one whose contour or convergence
// condition fails at u hands over to the next.
cplx eval_B(const RationalVec& alpha, const ParamPoint& u, const LimitOptions& opt) {
    const auto all = applicable_formulas(alpha, u.m);
    std::string why;
    for (const auto& f : all) {
        if (f.source == FormulaSource::SumIntegral) continue;
        try {
            return evaluate(f, u, opt);
        } catch (const ContourError& e) {
            why += std::string(why.empty() ? "" : "; ") + f.tag + ": " + e.what();
        } catch (const ConstraintError& e) {
            why += std::string(why.empty() ? "" : "; ") + f.tag + ": " + e.what();
        } catch (const QuadratureError& e) {
            why += std::string(why.empty() ? "" : "; ") + f.tag + ": " + e.what();
        }
    }
    throw ConstraintError("eval_B: no formula applies at these parameters (" + why + ")");
}

bool in_sum_integral_region(const RationalVec& alpha, int m) {
    return in_polytope(alpha, PolytopeId::P, m) && roles_sum_integral(alpha, m).has_value();
}

cplx eval_B_sum_integral(const RationalVec& alpha, const ParamPoint& u, cplx w, const LimitOptions& opt) {
    require_in_p(alpha, u.m);
    const auto roles = roles_sum_integral(alpha, u.m);
    if (!roles) throw std::invalid_argument("eval_B_sum_integral: " + alpha.str() + " is outside the region of the w-integral");
    const LimitFormula f = make_formula(FormulaSource::SumIntegral, alpha, *roles, u.m);
    const auto v = role_values(f, u, w);
    if (std::abs(theta(v[0] * w, u.q)) < 1e-13 || std::abs(theta(v[1] * w, u.q)) < 1e-13)
        throw std::invalid_argument("eval_B_sum_integral: w hits a zero of the theta denominators");
    return evaluate_sym(build(f), v, u.q, opt);
}

ParamPoint scale_params(const ParamPoint& u, cplx x, const RationalVec& delta) {
    if (delta.size() != u.u.size()) throw std::invalid_argument("scale_params: size mismatch");
    if (delta.sum() != Q(0)) throw std::invalid_argument("scale_params: exponent must sum to zero");
    ParamPoint r = u;
    const cplx lx = std::log(x);
    for (std::size_t k = 0; k < delta.size(); ++k)
        if (delta[k] != Q(0)) r.u[k] *= std::exp(to_double(delta[k]) * lx);
    return r;
}

ConvergenceReport verify_limit(const RationalVec& alpha, const ParamPoint& u, const std::vector<double>& p_schedule,
                               double tol_limit, const EllipticOptions& eopt, const LimitOptions& lopt) {
    for (std::size_t i = 0; i < p_schedule.size(); ++i)
        if (!(p_schedule[i] > 0.0) || (i && !(p_schedule[i] < p_schedule[i - 1])))
            throw std::invalid_argument("verify_limit: schedule must be positive and strictly decreasing");
    ConvergenceReport rep;
    rep.p_values = p_schedule;
    rep.target = eval_B(alpha, u, lopt);
    bool admissible = true;
    for (double p : p_schedule) {
        const auto t = shift_by_power(u.u, cplx(p), alpha);
        if (std::any_of(t.begin(), t.end(), [](cplx x) { return !(std::abs(x) < 1.0); })) {
            rep.errors.push_back(std::numeric_limits<double>::quiet_NaN());
            rep.note = "parameters leave the unit disk at p = " + std::to_string(p);
            admissible = false;
            continue;
        }
        const cplx e = elliptic_beta_integral(u.m, t, EllipticBase{cplx(p), u.q}, eopt);
        rep.errors.push_back(std::abs(e - rep.target));
    }
    if (!admissible) {
        rep.verdict = ConvergenceReport::Verdict::Failed;
        return rep;
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < rep.errors.size(); ++i)
        if (!(rep.errors[i] < rep.errors[i - 1])) decreasing = false;
    const bool small = !rep.errors.empty() && rep.errors.back() < tol_limit;
    if (decreasing && small) rep.verdict = ConvergenceReport::Verdict::Converging;
    else if (decreasing || small) rep.verdict = ConvergenceReport::Verdict::Inconclusive;
    else rep.verdict = ConvergenceReport::Verdict::Failed;
    return rep;
}

LimitWitness find_limit_witness(const RationalVec& alpha, int m, const std::vector<double>& p_schedule,
                                double tol_limit, const EllipticOptions& eopt, const LimitOptions& lopt) {
    static const std::pair<double, double> scales[] = {{1e-4, 0.02}, {1e-4, 1.0},  {1e-4, 0.0707}, {1e-3, 0.02},
                                                       {1e-4, 0.3},  {1e-4, 0.005}, {1e-5, 0.02},  {1e-5, 1.0}};
    if (p_schedule.empty()) throw std::invalid_argument("find_limit_witness: empty schedule");
    const std::size_t n = alpha.size();
    const double p_hi = p_schedule.front(), p_lo = p_schedule.back();
    LimitWitness best;
    bool have = false;
    for (const auto& [qv, y] : scales) {
        const double c = std::pow(qv * y, static_cast<double>(m + 1) / static_cast<double>(n));
        std::vector<cplx> first;
        for (std::size_t r = 0; r + 1 < n; ++r)
            first.push_back(std::polar(c * (1.0 + 0.02 * static_cast<double>(r)) * std::pow(y, -to_double(alpha[r])),
                                       0.3 + 0.7 * static_cast<double>(r)));
        const ParamPoint u = make_param_point(m, first, cplx(qv, 0.0));
        bool admissible = true;
        for (std::size_t r = 0; r < n; ++r) {
            const double a = to_double(alpha[r]);
            const double worst = std::abs(u.u[r]) * std::max(std::pow(p_hi, a), std::pow(p_lo, a));
            if (!(worst < 1.0 - lopt.margin)) admissible = false;
        }
        if (!admissible) continue;
        ++best.attempts;
        ConvergenceReport rep;
        try {
            rep = verify_limit(alpha, u, p_schedule, tol_limit, eopt, lopt);
        } catch (const std::exception& e) {
            rep.note = e.what();
        }
        const bool better = !have || (rep.verdict == ConvergenceReport::Verdict::Converging &&
                                      best.report.verdict != ConvergenceReport::Verdict::Converging);
        if (better) {
            best.u = u;
            best.report = rep;
            have = true;
        }
        if (rep.verdict == ConvergenceReport::Verdict::Converging) break;
    }
    if (!have) throw std::invalid_argument("find_limit_witness: no admissible scaling for " + alpha.str());
    return best;
}

double face_constancy_check(const RationalVec& alpha, const RationalVec& beta, const ParamPoint& u,
                            const LimitOptions& opt) {
    const auto fa = classify_point(alpha, PolytopeId::P, u.m), fb = classify_point(beta, PolytopeId::P, u.m);
    if (!fa.face || !fb.face || !(*fa.face == *fb.face))
        throw std::invalid_argument("face_constancy_check: points lie in different faces");
    return std::abs(eval_B(alpha, u, opt) - eval_B(beta, u, opt));
}

double orthogonal_dependence_check(const RationalVec& alpha, const RationalVec& beta, const ParamPoint& u, cplx x,
                                   const LimitOptions& opt) {
    const auto fa = classify_point(alpha, PolytopeId::P, u.m), fb = classify_point(beta, PolytopeId::P, u.m);
    if (!fa.face || !fb.face || !(*fa.face == *fb.face))
        throw std::invalid_argument("orthogonal_dependence_check: points lie in different faces");
    const ParamPoint shifted = scale_params(u, x, alpha - beta);
    return std::abs(eval_B(alpha, u, opt) - eval_B(alpha, shifted, opt));
}

cplx evaluation_limit_m0(const RationalVec& alpha, const ParamPoint& u) {
    if (!in_polytope(alpha, PolytopeId::Pext, 0)) throw std::invalid_argument("evaluation_limit_m0: alpha outside Pext");
    if (u.u.size() != 6) throw std::invalid_argument("evaluation_limit_m0: six parameters expected");
    cplx r = 1.0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j)
            if (alpha[i] + alpha[j] == Q(1)) r *= qpoch_inf(u.q / (u.u[i] * u.u[j]), u.q);
    return r;
}

}  // namespace ellim
