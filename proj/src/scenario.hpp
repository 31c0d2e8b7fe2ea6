#ifndef SIRW_SCENARIO_HPP
#define SIRW_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "integrate.hpp"
#include "intervention.hpp"

namespace sirw {

// Either an explicit (tau_s, tau_f, r_s) window or a goldilocks directive
// that computes r_s (and, when tau_f is absent, tau_f from the multiplier).
struct PolicyConfig {
    double tau_s = 0.0;
    std::optional<double> tau_f;
    std::optional<double> r_s;
    bool goldilocks = false;
    double qss_multiplier = 5.0;
};

struct OutputConfig {
    std::string trajectory_csv;
    std::string trajectory_json;
    std::string report_json;
};

struct ScenarioConfig {
    double r0 = 2.5;
    double epsilon = 0.005;
    std::optional<double> tau_end;
    std::optional<PolicyConfig> policy;
    IntegrationOptions integration;
    double qss_band = 0.01;
    double post_release_horizon = 400.0;
    OutputConfig output;

    ClassifyOptions classify_options() const;
    // tau_end fallback: past the policy window, or a plain 40-unit run.
    double effective_tau_end() const;
};

// Strict parser: unknown keys anywhere in the document are rejected.
ScenarioConfig parse_config(const std::string& json_text);
std::string serialize_config(const ScenarioConfig& cfg);

struct RunArtifact {
    std::optional<SingleIntervalPolicy> policy;
    std::optional<ScenarioReport> report;
    std::string trajectory_csv_path;
    std::string trajectory_json_path;
    std::string report_json_path;
    std::string config_echo;
    std::string version;
    std::string digest;  // 16 hex digits, identical for identical configs
};

// integrate -> classify -> export. Relative output paths resolve under
// output_dir; empty output_dir falls back to $SIRW_OUT_DIR, then ".".
RunArtifact run_scenario(const ScenarioConfig& cfg, const std::string& output_dir = "");

// Serialization helpers (schema: header "tau,S,I,C,R", 17 significant digits).
std::string trajectory_to_csv(const Trajectory& traj);
std::string trajectory_to_json(const Trajectory& traj);
std::string report_to_json(const ScenarioReport& report,
                           const std::optional<SingleIntervalPolicy>& policy);

void write_file(const std::string& path, const std::string& content);

std::string format_double(double v);
std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t seed = 14695981039346656037ull);

// One line of the published-value comparison table.
struct ReferenceRow {
    std::string name;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Re-runs the bundled benchmark scenarios (goldilocks level, the three
// long-window outcomes, the short-window sweep) and compares each result
// against its published reference value.
std::vector<ReferenceRow> reference_suite(const ClassifyOptions& opts = {});

} // namespace sirw

#endif
