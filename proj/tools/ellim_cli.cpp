// ellim: classification queries, face catalogs and identity suites.
#include "ellim/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <iostream>

using namespace ellim;
using nlohmann::json;

namespace {

int emit(const json& j, OutputFormat fmt, const std::string& text) {
    if (fmt == OutputFormat::Json) std::cout << j.dump(2) << "\n";
    else std::cout << text;
    return 0;
}

std::string classify_text(const json& j) {
    std::ostringstream o;
    o << "alpha " << j["alpha"].get<std::string>() << " (m = " << j["m"].get<int>() << ")\n";
    if (!j["inside"].get<bool>()) {
        o << "outside P; violated inequalities:\n";
        for (const auto& v : j["violated"])
            o << "  " << v["label"].get<std::string>() << ": " << v["value"].get<std::string>() << " > "
              << v["bound"].get<std::string>() << "\n";
        return o.str();
    }
    const auto& f = j["face"];
    o << (j["interior"].get<bool>() ? "interior" : "face") << " of dimension " << f["dim"].get<int>() << ", "
      << f["vertices"].size() << " vertices\n";
    for (const auto& v : f["vertices"]) o << "  (" << v.get<std::string>() << ")\n";
    o << "family " << j["family_tag"].get<std::string>() << " [" << j["formula"]["variant"].get<std::string>() << "]\n";
    if (j.contains("symmetry_type"))
        o << "symmetry " << j["symmetry_type"].get<std::string>() << ", affine symmetry "
          << j["affine_symmetry_type"].get<std::string>() << "\n";
    if (j.contains("orbit_classes")) o << "W(E7) orbit: " << j["orbit_classes"].get<int>() << " classes up to S8\n";
    for (const auto& c : j["formula"]["constraints"]) o << "constraint: " << c.get<std::string>() << "\n";
    return o.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limits of elliptic beta integrals: classification, catalogs and identity checks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string output;
    app.add_option("--config", config_path, std::string("JSON config file (default: $") + kConfigEnv + ")");
    app.add_option("--output", output, "text or json")->check(CLI::IsMember({"text", "json"}));

    std::string alpha_s;
    int m = 1;
    auto* classify = app.add_subcommand("classify", "face, family and symmetry of a point");
    classify->add_option("--alpha", alpha_s, "exact rationals, e.g. -1/4,0,0,1/4,1/4,1/2,1/2,3/4")->required();
    classify->add_option("--m", m, "0 or 1")->check(CLI::Range(0, 1));

    std::string suite, q_s, schedule_s;
    int trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    auto* verify = app.add_subcommand("verify", "run an identity suite");
    verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
    verify->add_option("--trials", trials, "number of random cases (suite default when 0)");
    auto* seed_opt = verify->add_option("--seed", seed, "base RNG seed");
    verify->add_option("--q", q_s, "base q, e.g. 0.2, 0.2+0.1i or 0.3@0.5");
    verify->add_option("--schedule", schedule_s, "decreasing p values for the limits suite");
    unsigned threads = 0;
    verify->add_option("--threads", threads, "worker threads (0: all cores)");

    int cat_m = 1;
    std::string golden;
    auto* catalog = app.add_subcommand("catalog", "face catalog, compared with the golden file");
    catalog->add_option("--m", cat_m, "0 or 1")->check(CLI::Range(0, 1));
    catalog->add_option("--golden", golden, "golden file (default: data directory)");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        RunConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
        if (!output.empty()) cfg.output = output == "text" ? OutputFormat::Text : OutputFormat::Json;

        if (*classify) {
            const json j = classify_report(parse_rational_vec(alpha_s), m);
            emit(j, cfg.output, classify_text(j));
            return j["inside"].get<bool>() ? 0 : 1;
        }

        if (*verify) {
            if (trials > 0) cfg.trials = trials;
            if (seed_set) cfg.seed = seed;
            if (!q_s.empty()) cfg.q = parse_complex(q_s);
            if (threads > 0) cfg.threads = threads;
            if (!schedule_s.empty()) {
                cfg.schedule.clear();
                std::stringstream ss(schedule_s);
                for (std::string tok; std::getline(ss, tok, ',');) cfg.schedule.push_back(std::stod(tok));
            }
            cfg.validate();
            const SuiteResult r = run_suite(suite, cfg);
            emit(to_json(r), cfg.output, to_text(r));
            return r.pass() ? 0 : 1;
        }

        if (*catalog) {
            const FaceCatalog cat = catalog_simplicial_faces(cat_m);
            const std::string path = golden.empty() ? golden_path(cat_m, cfg) : golden;
            std::vector<std::string> diff;
            std::ifstream in(path);
            if (!in) diff.push_back("cannot open golden file " + path);
            else {
                try {
                    diff = catalog_diff(cat, json::parse(in));
                } catch (const json::exception& e) {
                    diff.push_back("golden file " + path + " is not valid: " + e.what());
                }
            }
            json j = catalog_json(cat);
            j["golden"] = path;
            j["diff"] = diff;
            std::ostringstream t;
            for (const auto* list : {&cat.rows, &cat.non_simplicial})
                for (const auto& r : *list) {
                    t << "dim " << r.face.dim << "  " << r.family_tag;
                    if (cat_m == 1) t << "  " << r.symmetry_type << " / " << r.affine_symmetry_type;
                    t << "  (" << r.face.vertices.size() << " vertices, class of " << r.class_size << ")"
                      << (r.face.simplicial() ? "" : "  non-simplicial") << "\n";
                }
            for (const auto& d : diff) t << "diff: " << d << "\n";
            t << (diff.empty() ? "matches " : "differs from ") << path << "\n";
            emit(j, cfg.output, t.str());
            return diff.empty() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
