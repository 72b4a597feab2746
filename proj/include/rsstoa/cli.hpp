#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace rsstoa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct SolveOptions {
    std::optional<std::string> config_path;
    std::string measurements_path;
    std::optional<std::string> solver;  // grid | gd | pso | all
    std::optional<std::uint64_t> seed;  // PSO seed override
};

struct BenchOptions {
    std::optional<std::string> config_path;
    std::string out_dir;
    std::optional<std::string> solver;
    std::optional<std::uint64_t> seed;  // master seed override
};

struct ScenarioOptions {
    std::optional<std::string> config_path;  // only its signal section is used
    std::string out_path;
    double radius = 100.0;
    int n_receivers = 4;
    double target_x = 0.0;
    double target_y = 0.0;
    std::uint64_t seed = 1;
    std::optional<double> p0;
    std::optional<double> beta;
    std::optional<double> sigma_rss;
    std::optional<double> sigma_toa;
    std::optional<double> tau;
};

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);
int cmd_scenario(const ScenarioOptions& opts, std::ostream& out, std::ostream& err);

// Parses argv (verb first) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rsstoa::cli
