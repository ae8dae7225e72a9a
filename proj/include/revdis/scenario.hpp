#pragma once

// Batch front-end: JSON configs in, CSV data plus JSON run summaries out.
// Each scenario reproduces one figure-style dataset or validation sweep.
// Output is deterministic: a given config (seed included) produces
// byte-identical CSV at any thread count; only the wall-time entry in the
// summary varies between runs.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "revdis/lindblad.hpp"
#include "revdis/types.hpp"

namespace revdis {

enum class Scenario {
    FIG1,         // displaced amplitude surface + resonance curve
    FIG2,         // quadratic-coupling n_ss over (n_bar_m, C2)
    FIG3,         // four effective-model spectra + n_ss inset
    FIG4,         // effective linewidth vs n_bar_m, quadratic vs linear
    FIG5,         // linear-coupling n_ss over (n_bar_m, C1)
    COMPARE,      // full Lindblad steady state vs closed forms
    SPECTRUM,     // resolvent spectrum of a chosen model
    THERMOMETRY,  // synthetic noisy spectrum -> fit -> occupation report
};

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

// One sweep axis: either an inclusive linspace (min, max, count >= 2) or an
// explicit strictly increasing values list; exactly one form per axis.
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    std::vector<double> values;

    bool is_explicit() const { return !values.empty(); }
    std::vector<double> materialize() const;
};

struct ScenarioOptions {
    double c2 = 1.0;                 // quadratic cooperativity
    double c1 = 1.0;                 // linear cooperativity
    std::string model = "effective"; // spectrum scenario: effective|linear|full
    double noise_level = 0.01;       // thermometry multiplicative noise
    double omega_m_si = 6.283185307179586e6;  // SI mechanical angular frequency
};

struct ScenarioConfig {
    Scenario scenario = Scenario::FIG1;
    SystemParams params;
    HilbertDims dims{0, 0};  // used by fig3/compare/spectrum
    std::map<std::string, GridSpec> grids;
    std::string output_dir = ".";
    std::uint64_t seed = 12345;
    ScenarioOptions options;
};

struct RunSummary {
    std::string scenario;
    std::vector<std::string> files;     // written files, relative to output_dir
    std::vector<std::string> warnings;
    double wall_time_seconds = 0.0;
    nlohmann::json document;            // the full summary as written to disk
};

// scenario defaults before any file overrides are applied
ScenarioConfig default_config(Scenario s);

// Parse and range-check a config object against the schema. Unknown keys
// are errors. All violations are collected and reported together in one
// ConfigError, one message per line.
ScenarioConfig parse_config_json(const nlohmann::json& j);

// reads the file at path and delegates to parse_config_json
ScenarioConfig validate_config(const std::string& path);

// Runs the scenario, writing <scenario>.csv and <scenario>_summary.json
// (plus scenario-specific extras) into config.output_dir.
RunSummary run(const ScenarioConfig& config);

}  // namespace revdis
