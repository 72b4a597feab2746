#include "rsstoa/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rsstoa/config.hpp"
#include "rsstoa/error.hpp"

namespace rsstoa::cli {

namespace fs = std::filesystem;

namespace {

std::vector<SolverKind> resolve_solvers(const std::optional<std::string>& flag,
                                        const std::vector<SolverKind>& from_config) {
    if (!flag) return from_config;
    if (*flag == "all") return {kAllSolvers.begin(), kAllSolvers.end()};
    if (auto k = parse_solver_kind(*flag)) return {*k};
    throw ConfigError("--solver must be one of grid, gd, pso, all (got '" + *flag + "')");
}

// Largest receiver distance from the receivers' centroid; equals the radius
// for a ring centered on the target.
double receiver_spread(const std::vector<Position2D>& receivers) {
    Position2D c;
    for (const auto& r : receivers) {
        c.x += r.x;
        c.y += r.y;
    }
    c.x /= static_cast<double>(receivers.size());
    c.y /= static_cast<double>(receivers.size());
    double spread = 0.0;
    for (const auto& r : receivers) spread = std::max(spread, distance(c, r));
    return spread;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << content;
    out.close();
    if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void print_summary(const ExperimentReport& report, std::ostream& out) {
    out << std::left << std::setw(8) << "solver" << std::right << std::setw(12) << "RMSE (m)"
        << std::setw(12) << "80% (m)" << std::setw(12) << "95% (m)" << std::setw(16)
        << "mean time (s)" << std::setw(10) << "failures" << '\n';
    for (const auto& s : report.summaries) {
        out << std::left << std::setw(8) << to_string(s.solver) << std::right << std::fixed
            << std::setprecision(3) << std::setw(12) << s.rmse << std::setw(12) << s.p80
            << std::setw(12) << s.p95 << std::scientific << std::setprecision(4) << std::setw(16)
            << s.mean_time_s << std::setw(10) << s.failures << '\n';
        out << std::defaultfloat;
    }
}

}  // namespace

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    ScenarioFixture fixture;
    std::vector<SolverKind> solvers;
    try {
        if (opts.config_path) cfg = load_experiment_config(*opts.config_path);
        fixture = load_scenario_fixture(opts.measurements_path);
        solvers = resolve_solvers(opts.solver, cfg.solvers.enabled);
        if (opts.seed) cfg.solvers.pso.seed = *opts.seed;
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const auto ctx = ObjectiveContext::from_scenario(fixture.scenario, fixture.measurements);
        const auto configs = build_trial_configs(ctx, cfg.solvers, fixture.scenario.target,
                                                 receiver_spread(ctx.receivers), 0);
        for (auto kind : solvers) {
            SolverConfig sc;
            switch (kind) {
                case SolverKind::grid: sc = configs.grid; break;
                case SolverKind::gd: sc = configs.gd; break;
                case SolverKind::pso: sc = configs.pso; break;
            }
            const auto r = solve(ctx, sc);
            const auto& e = r.estimate;
            out << "solver " << to_string(kind) << '\n'
                << "x_m " << format_double(e.x) << '\n'
                << "y_m " << format_double(e.y) << '\n'
                << "p0_dbm " << format_double(e.p0) << '\n'
                << "b_m " << format_double(e.b) << '\n'
                << "tau_s " << format_double(e.tau()) << '\n'
                << "cost " << format_double(r.cost) << '\n'
                << "evaluations " << r.evaluations << '\n'
                << "error_m " << format_double(distance(e.position(), fixture.scenario.target))
                << '\n';
        }
    } catch (const Error& e) {
        err << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg;
    try {
        if (opts.config_path) cfg = load_experiment_config(*opts.config_path);
        cfg.solvers.enabled = resolve_solvers(opts.solver, cfg.solvers.enabled);
        if (opts.seed) cfg.master_seed = *opts.seed;
        cfg.validate();
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const fs::path dir(opts.out_dir);
    std::vector<fs::path> written;
    try {
        const auto report = run_experiment(cfg);

        const std::vector<std::pair<std::string, std::string>> files{
            {"errors.csv", errors_csv(report)},
            {"cdf.csv", cdf_csv(report)},
            {"summary.csv", summary_csv(report)},
            {"timings.csv", timings_csv(report)},
        };
        RunManifest manifest{cfg, RSSTOA_VERSION, cfg.master_seed, utc_timestamp(), {}};
        for (const auto& [name, _] : files) manifest.outputs.push_back((dir / name).string());

        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
        for (const auto& [name, content] : files) {
            written.push_back(dir / name);
            write_file(dir / name, content);
        }
        written.push_back(dir / "manifest.json");
        write_file(dir / "manifest.json", dump_manifest(manifest));

        print_summary(report, out);
    } catch (const Error& e) {
        for (const auto& p : written) {
            std::error_code ignored;
            fs::remove(p, ignored);
        }
        err << "bench failed: " << e.what() << '\n';
        return dynamic_cast<const ConfigError*>(&e) ? kExitConfig : kExitSolver;
    }
    return kExitOk;
}

int cmd_scenario(const ScenarioOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        SignalParams signal;
        if (opts.config_path) signal = load_experiment_config(*opts.config_path).signal;
        if (opts.p0) signal.p0_true = *opts.p0;
        if (opts.beta) signal.beta = *opts.beta;
        if (opts.sigma_rss) signal.sigma_rss = *opts.sigma_rss;
        if (opts.sigma_toa) signal.sigma_toa = *opts.sigma_toa;
        if (opts.tau) signal.tau_true = *opts.tau;

        ScenarioFixture f;
        f.scenario = make_ring_scenario({opts.target_x, opts.target_y}, opts.radius,
                                        opts.n_receivers, signal);
        f.seed = opts.seed;
        f.measurements = sample_measurements(f.scenario, opts.seed);
        write_file(opts.out_path, dump_scenario_fixture(f));
        out << "wrote " << opts.out_path << '\n';
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"RSS/TOA target localization: solvers and Monte Carlo benchmark"};
    app.require_subcommand(1);
    app.set_version_flag("--version", RSSTOA_VERSION);

    const std::string solver_help = "grid | gd | pso | all";

    SolveOptions solve_opts;
    std::string solve_config, solve_solver;
    std::uint64_t solve_seed = 0;
    auto* solve = app.add_subcommand("solve", "Run solvers on one measurement file");
    auto* solve_config_opt = solve->add_option("--config", solve_config, "Config file (JSON)");
    solve->add_option("--measurements", solve_opts.measurements_path,
                      "Scenario + measurements file written by `rsstoa scenario`")
        ->required();
    auto* solve_solver_opt = solve->add_option("--solver", solve_solver, solver_help);
    auto* solve_seed_opt = solve->add_option("--seed", solve_seed, "PSO seed override");

    BenchOptions bench_opts;
    std::string bench_config, bench_solver;
    std::uint64_t bench_seed = 0;
    auto* bench = app.add_subcommand("bench", "Run the Monte Carlo solver comparison");
    auto* bench_config_opt = bench->add_option("--config", bench_config, "Config file (JSON)");
    bench->add_option("--out", bench_opts.out_dir, "Output directory")->required();
    auto* bench_solver_opt = bench->add_option("--solver", bench_solver, solver_help);
    auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "Master seed override");

    ScenarioOptions scen_opts;
    std::string scen_config;
    std::vector<double> target;
    double p0 = 0, beta = 0, sigma_rss = 0, sigma_toa = 0, tau = 0;
    auto* scen = app.add_subcommand("scenario", "Write a ring scenario with sampled measurements");
    auto* scen_config_opt = scen->add_option("--config", scen_config, "Config file (signal section)");
    scen->add_option("--out", scen_opts.out_path, "Output file")->required();
    scen->add_option("--radius", scen_opts.radius, "Ring radius (m)");
    scen->add_option("--n-receivers", scen_opts.n_receivers, "Number of receivers");
    auto* target_opt = scen->add_option("--target", target, "Target position X,Y (m)")
                           ->delimiter(',')
                           ->expected(2);
    scen->add_option("--seed", scen_opts.seed, "Measurement noise seed");
    auto* p0_opt = scen->add_option("--p0", p0, "Reference power (dBm)");
    auto* beta_opt = scen->add_option("--beta", beta, "Path-loss exponent");
    auto* rss_opt = scen->add_option("--sigma-rss", sigma_rss, "RSS noise std (dB)");
    auto* toa_opt = scen->add_option("--sigma-toa", sigma_toa, "TOA noise std (s)");
    auto* tau_opt = scen->add_option("--tau", tau, "Clock bias (s)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << RSSTOA_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }

    if (*solve) {
        if (*solve_config_opt) solve_opts.config_path = solve_config;
        if (*solve_solver_opt) solve_opts.solver = solve_solver;
        if (*solve_seed_opt) solve_opts.seed = solve_seed;
        return cmd_solve(solve_opts, out, err);
    }
    if (*bench) {
        if (*bench_config_opt) bench_opts.config_path = bench_config;
        if (*bench_solver_opt) bench_opts.solver = bench_solver;
        if (*bench_seed_opt) bench_opts.seed = bench_seed;
        return cmd_bench(bench_opts, out, err);
    }
    if (*scen_config_opt) scen_opts.config_path = scen_config;
    if (*target_opt) {
        scen_opts.target_x = target[0];
        scen_opts.target_y = target[1];
    }
    if (*p0_opt) scen_opts.p0 = p0;
    if (*beta_opt) scen_opts.beta = beta;
    if (*rss_opt) scen_opts.sigma_rss = sigma_rss;
    if (*toa_opt) scen_opts.sigma_toa = sigma_toa;
    if (*tau_opt) scen_opts.tau = tau;
    return cmd_scenario(scen_opts, out, err);
}

}  // namespace rsstoa::cli
