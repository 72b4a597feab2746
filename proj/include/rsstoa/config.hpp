#pragma once

// File formats: JSON experiment config, JSON scenario fixtures, CSV reports
// and the JSON run manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rsstoa/bench.hpp"

namespace rsstoa {

// Shortest decimal string that parses back to the same double ("nan",
// "inf", "-inf" for non-finite values).
std::string format_double(double v);

// All sections and keys are optional and default to the reference-scale setup;
// unknown keys and wrong types throw ConfigError. A run manifest is also
// accepted, in which case its embedded config is used.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
std::string dump_experiment_config(const ExperimentConfig& cfg);

// A scenario plus one measurement draw, consumed by `rsstoa solve`.
struct ScenarioFixture {
    Scenario scenario;
    std::uint64_t seed = 0;
    MeasurementSet measurements;
};

ScenarioFixture parse_scenario_fixture(const std::string& json_text);
ScenarioFixture load_scenario_fixture(const std::filesystem::path& path);
std::string dump_scenario_fixture(const ScenarioFixture& fixture);

// errors.csv: solver,radius,trial,seed,error_m,evaluations
// Failed solves carry error_m = nan and evaluations = 0.
std::string errors_csv(const ExperimentReport& report);
// timings.csv: solver,radius,trial,time_s
std::string timings_csv(const ExperimentReport& report);
// cdf.csv: solver,error_m,fraction
std::string cdf_csv(const ExperimentReport& report);
// summary.csv: solver,rmse_m,p80_m,p95_m,mean_time_s,failures
std::string summary_csv(const ExperimentReport& report);

struct ErrorRow {
    std::string solver;
    double radius = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double error_m = 0.0;
    std::size_t evaluations = 0;
};

std::vector<ErrorRow> parse_errors_csv(const std::string& text);

struct RunManifest {
    ExperimentConfig config;
    std::string tool_version;
    std::uint64_t master_seed = 0;
    std::string timestamp;  // UTC, ISO 8601
    std::vector<std::string> outputs;
};

std::string dump_manifest(const RunManifest& manifest);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace rsstoa
