#include "ellim/report.hpp"

#include "ellim/face_lattice.hpp"
#include "ellim/qseries.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#ifndef ELLIM_DATA_DIR
#define ELLIM_DATA_DIR "data"
#endif

namespace ellim {

using nlohmann::json;

namespace {

const char* const kHeineAlpha = "-1/4,0,0,1/4,1/4,1/2,1/2,3/4";
const char* const kHeineRoots[] = {"-1/2,1/2,1/2,-1/2,-1/2,1/2,1/2,-1/2", "-1/2,1/2,1/2,1/2,-1/2,-1/2,-1/2,1/2",
                                   "0,0,0,1,-1,0,0,0"};
const char* const kHeineQuadruple[] = {kHeineAlpha, "3/4,0,0,1/4,1/4,1/2,1/2,-1/4", "1/4,1/2,1/2,3/4,-1/4,0,0,1/4",
                                       "1/4,1/2,1/2,-1/4,3/4,0,0,1/4"};

std::string vec_str(const RationalVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
    return s;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json params_json(const ParamPoint& u) {
    json us = json::array();
    for (auto x : u.u) us.push_back(cjson(x));
    return {{"m", u.m}, {"q", cjson(u.q)}, {"u", us}};
}

json word_json(const WeylWord& w) {
    json out = json::array();
    for (const auto& r : w.reflections) out.push_back(vec_str(r));
    return out;
}

double parse_real(const std::string& s) {
    if (s.find('/') != std::string::npos) return to_double(parse_rational(s));
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("not a number: " + s);
    return x;
}

const FaceDescriptor& heine_face() {
    static const FaceDescriptor f = *classify_point(parse_rational_vec(kHeineAlpha), PolytopeId::P, 1).face;
    return f;
}

WeylWord random_word(std::mt19937_64& rng, int max_len) {
    const auto& roots = enumerate_roots(RootSystem::E7);
    std::uniform_int_distribution<int> len(1, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
    WeylWord w;
    for (int k = len(rng); k > 0; --k) w.reflections.push_back(roots[pick(rng)]);
    return w;
}

using CaseFn = std::function<json()>;

SuiteResult run_cases(const std::string& name, const std::vector<CaseFn>& cases, unsigned threads) {
    SuiteResult out;
    out.suite = name;
    out.cases.resize(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cases.size(); k = next++) {
            json rec;
            try {
                rec = cases[k]();
            } catch (const std::exception& e) {
                rec = {{"error", e.what()}, {"pass", false}};
            }
            rec["case"] = k;
            out.cases[k] = std::move(rec);
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cases.size(), 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& c : out.cases)
        if (!c.value("pass", false)) ++out.failures;
    return out;
}

int trials_or(const RunConfig& cfg, int dflt) { return cfg.trials > 0 ? cfg.trials : dflt; }

json identity_case(const IdentityRecord& rec, double tol) { return to_json(rec, tol); }

// ---- suites ----

std::vector<CaseFn> gamma_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    const double tol = std::min(cfg.tol, 1e-12);
    for (int k = 0; k < trials_or(cfg, 100); ++k)
        out.push_back([=] {
            std::mt19937_64 rng(case_seed(cfg.seed, static_cast<std::uint64_t>(k)));
            std::uniform_real_distribution<double> mod(0.2, 2.0), arg(0.0, 2.0 * std::numbers::pi);
            const double r = mod(rng);
            const cplx z = std::polar(r, arg(rng));
            const EllipticBase b{cfg.p, cfg.q};
            const cplx pq = cfg.p * cfg.q;
            auto rel = [](cplx a, cplx c) { return std::abs(a - c) / std::max(std::abs(a), std::abs(c)); };
            const cplx g = elliptic_gamma(z, b);
            const double refl = std::abs(g * elliptic_gamma(pq / z, b) - 1.0);
            const double qdiff = rel(elliptic_gamma(cfg.q * z, b), theta(z, cfg.p) * g);
            const double pdiff = rel(elliptic_gamma(cfg.p * z, b), theta(z, cfg.q) * g);
            const double res = std::max({refl, qdiff, pdiff});
            return json{{"kind", "gamma"},
                        {"z", cjson(z)},
                        {"residuals", {{"reflection", refl}, {"q_difference", qdiff}, {"p_difference", pdiff}}},
                        {"residual", res},
                        {"seed", case_seed(cfg.seed, static_cast<std::uint64_t>(k))},
                        {"tolerance", tol},
                        {"pass", res < tol}};
        });
    return out;
}

std::vector<CaseFn> e0_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    for (int k = 0; k < trials_or(cfg, 50); ++k)
        out.push_back([=] {
            const std::uint64_t seed = case_seed(cfg.seed, static_cast<std::uint64_t>(k));
            std::mt19937_64 rng(seed);
            const cplx pq = cfg.p * cfg.q;
            const double scale = std::pow(std::abs(pq), 1.0 / 6.0);
            DrawOptions d;
            d.q = pq;
            d.r_min = 0.3 / scale;
            d.r_max = 0.8 / scale;
            const ParamPoint t = random_params(0, rng, d);
            const EllipticBase b{cfg.p, cfg.q};
            const cplx lhs = elliptic_beta_integral(0, t.u, b, cfg.elliptic_options());
            const cplx rhs = e0_evaluation_rhs(t.u, b);
            const double res = std::abs(lhs - rhs) / std::abs(rhs);
            return json{{"kind", "e0"},        {"params", params_json(t)}, {"lhs", cjson(lhs)},
                        {"rhs", cjson(rhs)},   {"residual", res},          {"seed", seed},
                        {"tolerance", cfg.tol}, {"pass", res < cfg.tol}};
        });
    return out;
}

std::vector<CaseFn> e7_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    std::vector<RationalVec> half, perm;
    for (const auto& r : enumerate_roots(RootSystem::E7)) (r.all_integer() ? perm : half).push_back(r);
    for (int k = 0; k < trials_or(cfg, 20); ++k)
        out.push_back([=] {
            const std::uint64_t seed = case_seed(cfg.seed, static_cast<std::uint64_t>(k));
            std::mt19937_64 rng(seed);
            const auto& pool = k % 2 == 0 ? half : perm;
            const RationalVec root = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
            const WeylWord w{{root}};
            DrawOptions d = cfg.draw_options();
            d.q = cfg.p * cfg.q;
            const EllipticBase b{cfg.p, cfg.q};
            for (int attempt = 1; attempt <= d.max_attempts; ++attempt) {
                const ParamPoint t = random_params(1, rng, d);
                try {
                    const double res = w_e7_invariance_residual(t.u, w, b, cfg.elliptic_options());
                    return json{{"kind", "e7"},
                                {"weyl_word", word_json(w)},
                                {"permutation", root.all_integer()},
                                {"params", params_json(t)},
                                {"residual", res},
                                {"seed", seed},
                                {"attempts", attempt},
                                {"tolerance", cfg.tol},
                                {"pass", res < cfg.tol}};
                } catch (const std::domain_error&) {
                }
            }
            throw DrawExhausted("e7: no admissible parameters");
        });
    return out;
}

// Parameters with |t_r p^{a_r}| < 1 for every vertex a of the triangle.
std::vector<cplx> contiguous_params(const TriangleShift& tri, const RunConfig& cfg, std::mt19937_64& rng) {
    const double ap = std::abs(cfg.p);
    std::vector<double> bound(8, 1.0);
    for (const auto* v : {&tri.alpha, &tri.beta, &tri.gamma})
        for (std::size_t r = 0; r < 8; ++r) bound[r] = std::min(bound[r], std::pow(ap, -to_double((*v)[r])));
    std::uniform_real_distribution<double> mod(0.3, 0.95), arg(0.0, 2.0 * std::numbers::pi);
    const cplx level = std::pow(cfg.p * cfg.q, 2);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<cplx> t(8);
        cplx prod = 1.0;
        for (std::size_t r = 0; r < 7; ++r) {
            t[r] = std::polar(bound[r] * mod(rng), arg(rng));
            prod *= t[r];
        }
        t[7] = level / prod;
        const double rel = std::abs(t[7]) / bound[7];
        if (rel < 0.95 && rel > 0.05) return t;
    }
    throw DrawExhausted("contiguous: no admissible parameters");
}

std::vector<CaseFn> contiguous_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    const RationalVec e0 = unit_vec(8, 0);
    const TriangleShift base{unit_vec(8, 1) - e0, unit_vec(8, 2) - e0, unit_vec(8, 3) - e0};
    for (int k = 0; k <= trials_or(cfg, 5); ++k)
        out.push_back([=] {
            const std::uint64_t seed = case_seed(cfg.seed, static_cast<std::uint64_t>(k));
            std::mt19937_64 rng(seed);
            TriangleShift tri = base;
            json word = json::array();
            if (k > 0) {
                const WeylWord w = random_word(rng, 3);
                tri = {w.act(base.alpha), w.act(base.beta), w.act(base.gamma)};
                word = word_json(w);
            }
            const auto t = contiguous_params(tri, cfg, rng);
            const auto res = p_contiguous_residual(t, tri, EllipticBase{cfg.p, cfg.q}, cfg.elliptic_options());
            const double r = res.relative();
            return json{{"kind", "p_contiguous"},
                        {"triangle", {vec_str(tri.alpha), vec_str(tri.beta), vec_str(tri.gamma)}},
                        {"weyl_word", word},
                        {"params", params_json(ParamPoint{1, t, cfg.p * cfg.q})},
                        {"residual", r},
                        {"seed", seed},
                        {"tolerance", cfg.tol},
                        {"pass", r < cfg.tol}};
        });
    return out;
}

std::vector<CaseFn> limit_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    const FaceCatalog cat = catalog_simplicial_faces(1);
    for (std::size_t k = 0; k < cat.rows.size(); ++k)
        out.push_back([=, row = cat.rows[k]] {
            const RationalVec alpha = row.face.centroid();
            const LimitOptions lopt = cfg.limit_options();
            const LimitWitness wit =
                find_limit_witness(alpha, 1, cfg.schedule, cfg.tol_limit, cfg.elliptic_options(), lopt);
            const auto& rep = wit.report;
            json errors = json::array();
            for (double e : rep.errors) errors.push_back(e);

            // Every formula applying at alpha, at one draw where all of them evaluate.
            const auto formulas = applicable_formulas(alpha, 1);
            const std::uint64_t seed = case_seed(cfg.seed, k);
            int attempts = 0;
            const auto values = draw_admissible(
                1, seed, cfg.draw_options(),
                [&](const ParamPoint& u) {
                    std::vector<cplx> v;
                    for (const auto& f : formulas) {
                        try {
                            v.push_back(evaluate(f, u, lopt));
                        } catch (const std::runtime_error& e) {
                            throw InadmissibleError(e.what());
                        }
                    }
                    return std::make_pair(u, v);
                },
                &attempts);
            double overlap = 0.0;
            for (std::size_t i = 0; i < values.second.size(); ++i)
                for (std::size_t j = i + 1; j < values.second.size(); ++j) {
                    const cplx a = values.second[i], b = values.second[j];
                    overlap = std::max(overlap, relative_residual({a, b}, a - b));
                }
            json tags = json::array();
            for (const auto& f : formulas) tags.push_back(f.tag + " [" + to_string(f.variant) + "]");
            const bool conv = rep.verdict == ConvergenceReport::Verdict::Converging;
            return json{{"kind", "limit"},
                        {"family_tag", row.family_tag},
                        {"alpha", vec_str(alpha)},
                        {"witness_params", params_json(wit.u)},
                        {"p_values", rep.p_values},
                        {"errors", errors},
                        {"verdict", to_string(rep.verdict)},
                        {"note", rep.note},
                        {"witness_attempts", wit.attempts},
                        {"tolerance_limit", cfg.tol_limit},
                        {"overlap", {{"formulas", tags},
                                     {"params", params_json(values.first)},
                                     {"residual", overlap},
                                     {"seed", seed},
                                     {"attempts", attempts},
                                     {"tolerance", cfg.tol}}},
                        {"pass", conv && overlap < cfg.tol}};
        });
    return out;
}

std::vector<CaseFn> symmetry_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    const int trials = trials_or(cfg, 10);
    std::vector<std::pair<FaceDescriptor, RationalVec>> gens;
    for (const char* r : kHeineRoots) gens.emplace_back(heine_face(), parse_rational_vec(r));
    for (const auto& row : catalog_simplicial_faces(1).rows)
        for (const auto& r : simple_roots(face_stabilizer(row.face).roots)) gens.emplace_back(row.face, r);
    std::uint64_t idx = 0;
    for (const auto& [face, root] : gens)
        for (int j = 0; j < trials; ++j, ++idx)
            out.push_back([=] {
                const std::uint64_t seed = case_seed(cfg.seed, idx);
                int attempts = 0;
                IdentityRecord rec = draw_admissible(
                    1, seed, cfg.draw_options(),
                    [&](const ParamPoint& u) { return symmetry_identity(face, WeylWord{{root}}, u, cfg.limit_options()); },
                    &attempts);
                rec.seed = seed;
                rec.attempts = attempts;
                return identity_case(rec, cfg.tol);
            });
    return out;
}

std::vector<CaseFn> transformation_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    const int trials = trials_or(cfg, 10);
    const auto chain = transformation_chain(heine_face());
    std::uint64_t idx = 0;
    for (const auto& member : chain) {
        if (member.word.reflections.empty()) continue;
        for (int j = 0; j < trials; ++j, ++idx)
            out.push_back([=] {
                const std::uint64_t seed = case_seed(cfg.seed, idx);
                int attempts = 0;
                IdentityRecord rec = draw_admissible(
                    1, seed, cfg.draw_options(),
                    [&](const ParamPoint& u) {
                        return transformation_identity(heine_face(), member.word, u, cfg.limit_options());
                    },
                    &attempts);
                rec.seed = seed;
                rec.attempts = attempts;
                json j = identity_case(rec, cfg.tol);
                const std::string src = face_stabilizer(rec.faces[0]).type, dst = face_stabilizer(rec.faces[1]).type;
                j["stabilizer_types"] = {src, dst};
                j["pass"] = j["pass"].get<bool>() && src == dst;
                return j;
            });
    }
    return out;
}

std::vector<CaseFn> three_term_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    std::vector<RationalVec> quad;
    for (const char* s : kHeineQuadruple) quad.push_back(parse_rational_vec(s));
    const auto tris = triangles_among(quad);
    const int trials = trials_or(cfg, 10);
    std::uint64_t idx = 0;
    auto add = [&](std::function<TriangleShift(std::mt19937_64&)> make, bool random_image) {
        out.push_back([=] {
            const std::uint64_t seed = case_seed(cfg.seed, idx);
            std::mt19937_64 rng(seed);
            const TriangleShift tri = make(rng);
            int attempts = 0;
            IdentityRecord rec = draw_admissible(
                1, case_seed(seed, 1), cfg.draw_options(),
                [&](const ParamPoint& u) { return three_term_relation(tri, u, cfg.limit_options()); }, &attempts);
            rec.seed = seed;
            rec.attempts = attempts;
            json j = identity_case(rec, cfg.tol);
            j["random_image"] = random_image;
            return j;
        });
        ++idx;
    };
    for (const auto& t : tris) add([t](std::mt19937_64&) { return t; }, false);
    for (int k = 0; k < trials; ++k)
        add(
            [tris, k](std::mt19937_64& rng) {
                const TriangleShift& t = tris[static_cast<std::size_t>(k) % tris.size()];
                const WeylWord w = random_word(rng, 4);
                return TriangleShift{w.act(t.alpha), w.act(t.beta), w.act(t.gamma)};
            },
            true);

    const double qtol = std::min(cfg.tol, 1e-12);
    const QShift shifts[] = {QShift::A, QShift::B, QShift::C};
    for (QShift s : shifts)
        out.push_back([=] { return identity_case(q_contiguous_example(Phi21{0.3, 0.5, 0.7, 0.2, 0.4}, s), qtol); });
    for (int k = 0; k < trials; ++k)
        out.push_back([=] {
            const std::uint64_t seed = case_seed(cfg.seed, idx + static_cast<std::uint64_t>(k));
            int attempts = 0;
            IdentityRecord rec = draw_admissible(
                1, seed, cfg.draw_options(),
                [&](const ParamPoint& u) { return q_contiguous_example(u, shifts[k % 3]); }, &attempts);
            rec.seed = seed;
            rec.attempts = attempts;
            return identity_case(rec, qtol);
        });
    return out;
}

std::vector<CaseFn> catalog_m0_cases(const RunConfig& cfg) {
    std::vector<CaseFn> out;
    // Drawn sequentially; the records are reproducible from the seed alone.
    for (const auto& rec : evaluation_catalog_m0(cfg.seed, cfg.draw_options(), cfg.limit_options()))
        out.push_back([=] { return identity_case(rec, cfg.tol); });

    const double wtol = std::min(cfg.tol, 1e-9);
    const cplx w1 = std::polar(0.83, 0.61), w2 = std::polar(1.21, -1.9);
    std::uint64_t idx = 1000;
    const FaceCatalog cat = catalog_simplicial_faces(0);
    for (const auto* list : {&cat.rows, &cat.non_simplicial})
        for (const auto& row : *list) {
            const RationalVec alpha = row.face.centroid();
            if (!in_sum_integral_region(alpha, 0)) continue;
            out.push_back([=, tag = row.family_tag] {
                const std::uint64_t seed = case_seed(cfg.seed, idx);
                int attempts = 0;
                IdentityRecord rec = draw_admissible(
                    0, seed, cfg.draw_options(),
                    [&](const ParamPoint& u) { return w_independence(alpha, u, w1, w2, cfg.limit_options()); },
                    &attempts);
                rec.seed = seed;
                rec.attempts = attempts;
                rec.label = tag + ", w-independence";
                json j = identity_case(rec, wtol);
                j["w"] = {cjson(w1), cjson(w2)};
                return j;
            });
            ++idx;
        }
    return out;
}

const std::map<std::string, std::function<std::vector<CaseFn>(const RunConfig&)>>& suites() {
    static const std::map<std::string, std::function<std::vector<CaseFn>(const RunConfig&)>> s = {
        {"gamma", gamma_cases},
        {"e0", e0_cases},
        {"e7", e7_cases},
        {"contiguous", contiguous_cases},
        {"limits", limit_cases},
        {"symmetries", symmetry_cases},
        {"transformations", transformation_cases},
        {"three-term", three_term_cases},
        {"catalog-m0", catalog_m0_cases},
    };
    return s;
}

}  // namespace

// ---- config ----

void RunConfig::validate() const {
    auto fail = [](const std::string& f, const std::string& why) { throw std::invalid_argument("config: " + f + " " + why); };
    if (!(std::abs(q) < 1.0) || q == 0.0) fail("q", "must satisfy 0 < |q| < 1");
    if (!(std::abs(p) < 1.0) || p == 0.0) fail("p", "must satisfy 0 < |p| < 1");
    if (!(tol > 0.0)) fail("tol", "must be positive");
    if (!(tol_limit > 0.0)) fail("tol_limit", "must be positive");
    if (!(margin > 0.0 && margin < 1.0)) fail("margin", "must lie in (0, 1)");
    if (quad_nodes_init < 2 || quad_nodes_max < quad_nodes_init) fail("quad_nodes_init", "must be >= 2 and <= quad_nodes_max");
    if (series_cap <= 0) fail("series_cap", "must be positive");
    if (trials < 0) fail("trials", "must be non-negative");
    if (schedule.empty()) fail("schedule", "must be non-empty");
    for (std::size_t i = 0; i < schedule.size(); ++i)
        if (!(schedule[i] > 0.0 && schedule[i] < 1.0) || (i && !(schedule[i] < schedule[i - 1])))
            fail("schedule", "must be strictly decreasing in (0, 1)");
}

QuadratureOptions RunConfig::quadrature() const {
    QuadratureOptions o;
    o.n_init = quad_nodes_init;
    o.n_max = quad_nodes_max;
    return o;
}

LimitOptions RunConfig::limit_options() const {
    LimitOptions o;
    o.quad = quadrature();
    o.margin = margin;
    o.series_cap = series_cap;
    return o;
}

EllipticOptions RunConfig::elliptic_options() const {
    EllipticOptions o;
    o.quad = quadrature();
    return o;
}

DrawOptions RunConfig::draw_options() const {
    DrawOptions d;
    d.q = q;
    return d;
}

cplx parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("empty complex number");
    if (const auto at = s.find('@'); at != std::string::npos)
        return std::polar(parse_real(s.substr(0, at)), parse_real(s.substr(at + 1)));
    if (s.back() != 'i') return parse_real(s);
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    auto imag = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_real(t);
    };
    if (split == std::string::npos) return {0.0, imag(s)};
    return {parse_real(s.substr(0, split)), imag(s.substr(split))};
}

std::string format_complex(cplx z) {
    std::ostringstream o;
    o.precision(17);
    o << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return o.str();
}

RunConfig config_from_json(const json& j, RunConfig c) {
    static const std::set<std::string> known = {"q",      "p",         "tol",    "tol_limit", "quad_nodes_init",
                                                "quad_nodes_max", "series_cap", "seed", "margin",    "output",
                                                "trials", "schedule",  "threads", "data_dir"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw std::invalid_argument("config: unknown key " + k);
    auto complex_of = [](const json& v) {
        if (v.is_string()) return parse_complex(v.get<std::string>());
        if (v.is_array()) return cplx(v.at(0).get<double>(), v.at(1).get<double>());
        return cplx(v.get<double>(), 0.0);
    };
    if (j.contains("q")) c.q = complex_of(j["q"]);
    if (j.contains("p")) c.p = complex_of(j["p"]);
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("tol_limit")) c.tol_limit = j["tol_limit"].get<double>();
    if (j.contains("quad_nodes_init")) c.quad_nodes_init = j["quad_nodes_init"].get<int>();
    if (j.contains("quad_nodes_max")) c.quad_nodes_max = j["quad_nodes_max"].get<int>();
    if (j.contains("series_cap")) c.series_cap = j["series_cap"].get<long>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("margin")) c.margin = j["margin"].get<double>();
    if (j.contains("output")) {
        const auto o = j["output"].get<std::string>();
        if (o != "text" && o != "json") throw std::invalid_argument("config: output must be text or json");
        c.output = o == "text" ? OutputFormat::Text : OutputFormat::Json;
    }
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("schedule")) c.schedule = j["schedule"].get<std::vector<double>>();
    if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
    if (j.contains("data_dir")) c.data_dir = j["data_dir"].get<std::string>();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    return config_from_json(json::parse(in), std::move(base));
}

RunConfig default_config() {
    const char* path = std::getenv(kConfigEnv);
    if (path && *path) return load_config(path);
    return {};
}

// ---- suites and records ----

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"gamma",      "e0",          "e7",       "contiguous", "limits",
                                                   "symmetries", "transformations", "three-term", "catalog-m0"};
    return names;
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    const auto it = suites().find(name);
    if (it == suites().end()) throw std::invalid_argument("unknown suite " + name);
    return run_cases(name, it->second(cfg), cfg.threads);
}

json to_json(const FaceDescriptor& face) {
    json vs = json::array();
    for (const auto& v : face.vertices) vs.push_back(vec_str(v));
    return {{"polytope", to_string(face.polytope)}, {"m", face.m}, {"dim", face.dim}, {"vertices", vs}};
}

json to_json(const IdentityRecord& rec, double tol) {
    json faces = json::array();
    for (const auto& f : rec.faces) faces.push_back(to_json(f));
    json terms = json::array();
    for (auto t : rec.terms) terms.push_back(cjson(t));
    json j = {{"kind", to_string(rec.kind)},
              {"label", rec.label},
              {"faces", faces},
              {"weyl_word", rec.weyl_word ? word_json(*rec.weyl_word) : json(nullptr)},
              {"residual", rec.residual},
              {"terms", terms},
              {"seed", rec.seed},
              {"attempts", rec.attempts},
              {"params", rec.witness_params.u.empty() ? json(nullptr) : params_json(rec.witness_params)},
              {"tolerance", tol},
              {"pass", rec.residual < tol}};
    if (rec.triangle)
        j["triangle"] = {vec_str(rec.triangle->alpha), vec_str(rec.triangle->beta), vec_str(rec.triangle->gamma)};
    return j;
}

json to_json(const SuiteResult& r) {
    return {{"schema_version", kSchemaVersion},
            {"suite", r.suite},
            {"cases", r.cases},
            {"failures", r.failures},
            {"pass", r.pass()}};
}

std::string to_text(const SuiteResult& r) {
    std::ostringstream o;
    o.precision(3);
    for (const auto& c : r.cases) {
        o << r.suite << " #" << c.value("case", 0) << (c.value("pass", false) ? " PASS" : " FAIL");
        if (c.contains("label") && !c["label"].get<std::string>().empty()) o << "  " << c["label"].get<std::string>();
        if (c.contains("family_tag")) o << "  " << c["family_tag"].get<std::string>();
        if (c.contains("residual")) o << "  residual " << std::scientific << c["residual"].get<double>();
        if (c.contains("verdict")) o << "  " << c["verdict"].get<std::string>();
        if (c.contains("error")) o << "  error: " << c["error"].get<std::string>();
        o << "\n";
    }
    o << r.suite << ": " << (r.cases.size() - r.failures) << "/" << r.cases.size() << " passed\n";
    return o.str();
}

json classify_report(const RationalVec& alpha, int m) {
    json j = {{"schema_version", kSchemaVersion}, {"alpha", vec_str(alpha)}, {"m", m}};
    if (alpha.size() != ambient_size(PolytopeId::P, m))
        throw std::invalid_argument("classify: alpha needs " + std::to_string(ambient_size(PolytopeId::P, m)) + " coordinates");
    if (alpha.sum() != hyperplane_level(PolytopeId::P, m))
        throw std::invalid_argument("classify: coordinates must sum to " + to_string(hyperplane_level(PolytopeId::P, m)));
    const Classification c = classify_point(alpha, PolytopeId::P, m);
    if (!c.face) {
        json v = json::array();
        for (const auto& e : c.violated)
            v.push_back({{"label", e.label}, {"normal", vec_str(e.mu)}, {"bound", to_string(e.c)},
                         {"value", to_string(e.mu.dot(alpha))}});
        j["inside"] = false;
        j["violated"] = v;
        return j;
    }
    const FaceDescriptor& face = *c.face;
    const LimitFormula f = formula_for_face(face);
    j["inside"] = true;
    j["face"] = to_json(face);
    j["interior"] = face.interior();
    j["simplicial"] = face.simplicial();
    j["family_tag"] = f.tag;
    j["formula"] = {{"variant", to_string(f.variant)}, {"constraints", f.constraints}};
    if (m == 1) {
        j["symmetry_type"] = face_stabilizer(face).type;
        j["affine_symmetry_type"] = affine_stabilizer_type(face);
        if (!face.interior()) j["orbit_classes"] = face_orbit(face).s8_classes;
    }
    return j;
}

json catalog_json(const FaceCatalog& cat) {
    auto rows = [&](const std::vector<FaceCatalogRow>& list) {
        json out = json::array();
        for (const auto& r : list) {
            json vs = json::array();
            for (const auto& v : r.face.vertices) vs.push_back(vec_str(v));
            json row = {{"dim", r.face.dim}, {"vertices", vs}, {"family_tag", r.family_tag}, {"class_size", r.class_size}};
            if (cat.m == 1) {
                row["symmetry_type"] = r.symmetry_type;
                row["affine_symmetry_type"] = r.affine_symmetry_type;
            } else {
                row["polytope"] = to_string(r.face.polytope);
            }
            out.push_back(row);
        }
        return out;
    };
    return {{"schema_version", kSchemaVersion}, {"m", cat.m}, {"rows", rows(cat.rows)}, {"non_simplicial", rows(cat.non_simplicial)}};
}

std::string golden_path(int m, const RunConfig& cfg) {
    const std::string dir = cfg.data_dir.empty() ? std::string(ELLIM_DATA_DIR) : cfg.data_dir;
    return dir + (m == 1 ? "/catalog_m1.json" : "/catalog_m0.json");
}

std::vector<std::string> catalog_diff(const FaceCatalog& cat, const json& golden) {
    std::vector<std::string> out;
    if (golden.value("schema_version", 0) != kSchemaVersion)
        out.push_back("golden schema_version " + golden.value("schema_version", json(nullptr)).dump() + ", expected " +
                      std::to_string(kSchemaVersion));
    if (golden.value("m", -1) != cat.m) out.push_back("golden file is for m = " + golden.value("m", json(nullptr)).dump());
    const json computed = catalog_json(cat);
    for (const char* section : {"rows", "non_simplicial"}) {
        std::map<std::string, json> have, want;
        for (const auto& r : computed.at(section)) have[r.at("vertices").dump()] = r;
        if (golden.contains(section))
            for (const auto& r : golden.at(section)) want[r.value("vertices", json::array()).dump()] = r;
        for (const auto& [key, g] : want) {
            const auto it = have.find(key);
            if (it == have.end()) {
                out.push_back(std::string(section) + ": golden row " + key + " (" + g.value("family_tag", "") + ") not computed");
                continue;
            }
            for (const char* field : {"dim", "family_tag", "symmetry_type", "affine_symmetry_type"}) {
                if (!g.contains(field) && !it->second.contains(field)) continue;
                const json gv = g.value(field, json(nullptr)), cv = it->second.value(field, json(nullptr));
                if (gv != cv)
                    out.push_back(std::string(section) + ": row " + key + " " + field + ": golden " + gv.dump() +
                                  ", computed " + cv.dump());
            }
        }
        for (const auto& [key, c] : have)
            if (!want.count(key))
                out.push_back(std::string(section) + ": computed row " + key + " (" + c.value("family_tag", "") +
                              ") missing from golden file");
    }
    return out;
}

}  // namespace ellim
