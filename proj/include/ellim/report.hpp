#pragma once

#include "ellim/catalog.hpp"
#include "ellim/identities.hpp"
#include "ellim/limits.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ellim {

inline constexpr int kSchemaVersion = 1;

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "ELLIM_CONFIG";

enum class OutputFormat { Text, Json };

struct RunConfig {
    cplx q = 0.2;   // base of the basic-level identities, and q of the elliptic suites
    cplx p = 0.15;  // p of the elliptic suites
    double tol = 1e-8;
    double tol_limit = 1e-3;
    int quad_nodes_init = 64;
    int quad_nodes_max = 1 << 15;
    long series_cap = 100000;
    std::uint64_t seed = 1;
    double margin = 0.05;
    OutputFormat output = OutputFormat::Json;
    int trials = 0;  // 0: the suite's own default
    std::vector<double> schedule = {0.2, 0.1, 0.05, 0.025};
    unsigned threads = 0;  // 0: hardware concurrency
    std::string data_dir;  // golden catalog files; empty: the build-time data directory

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    QuadratureOptions quadrature() const;
    LimitOptions limit_options() const;
    EllipticOptions elliptic_options() const;
    DrawOptions draw_options() const;
};

/// Fields present in j override base.  Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
/// Defaults, overridden by the file named in ELLIM_CONFIG when set.
RunConfig default_config();

/// "0.3", "0.3+0.1i", "-0.2i", or modulus@argument as in "0.5@1.2".
cplx parse_complex(const std::string& s);
std::string format_complex(cplx z);

const std::vector<std::string>& suite_names();

struct SuiteResult {
    std::string suite;
    std::vector<nlohmann::json> cases;  // each has "pass"
    std::size_t failures = 0;
    bool pass() const { return failures == 0; }
};

/// Cases run in parallel; records are returned in case order.
SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

nlohmann::json to_json(const SuiteResult& r);
nlohmann::json to_json(const IdentityRecord& rec, double tol);
nlohmann::json to_json(const FaceDescriptor& face);
std::string to_text(const SuiteResult& r);

/// Classification of alpha: face, tag, symmetry types and formula
/// constraints, or the violated inequalities ("inside": false).
nlohmann::json classify_report(const RationalVec& alpha, int m);

nlohmann::json catalog_json(const FaceCatalog& cat);
std::string golden_path(int m, const RunConfig& cfg);
/// Human-readable differences between the computed catalog and a golden file.
std::vector<std::string> catalog_diff(const FaceCatalog& cat, const nlohmann::json& golden);

}  // namespace ellim
