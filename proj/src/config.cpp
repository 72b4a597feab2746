#include "rsstoa/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "rsstoa/error.hpp"

namespace rsstoa {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::string_view section,
                std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object())
        throw ConfigError("section '" + std::string(section) + "' must be an object");
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known)
            throw ConfigError("unknown key '" + key + "' in section '" + std::string(section) + "'");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out, std::string_view section) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + std::string(key) + "' in section '" + std::string(section)
                          + "' has the wrong type");
    }
}

void read_number(const json& obj, const char* key, double& out, std::string_view section) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_number())
        throw ConfigError("key '" + std::string(key) + "' in section '" + std::string(section)
                          + "' must be a number");
    out = obj.at(key).get<double>();
}

void read_seed(const json& obj, const char* key, std::uint64_t& out, std::string_view section) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_number_unsigned())
        throw ConfigError("key '" + std::string(key) + "' in section '" + std::string(section)
                          + "' must be a non-negative integer");
    out = obj.at(key).get<std::uint64_t>();
}

Position2D read_point(const json& j, std::string_view what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(what) + " must be an [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json point_json(const Position2D& p) { return json::array({p.x, p.y}); }

SignalParams parse_signal(const json& j) {
    SignalParams s;
    check_keys(j, "signal", {"p0_dbm", "beta", "d0_m", "sigma_rss_db", "sigma_toa_s", "tau_s"});
    read_number(j, "p0_dbm", s.p0_true, "signal");
    read_number(j, "beta", s.beta, "signal");
    read_number(j, "d0_m", s.d0, "signal");
    read_number(j, "sigma_rss_db", s.sigma_rss, "signal");
    read_number(j, "sigma_toa_s", s.sigma_toa, "signal");
    read_number(j, "tau_s", s.tau_true, "signal");
    return s;
}

json signal_json(const SignalParams& s) {
    return {{"p0_dbm", s.p0_true},         {"beta", s.beta},
            {"d0_m", s.d0},                {"sigma_rss_db", s.sigma_rss},
            {"sigma_toa_s", s.sigma_toa},  {"tau_s", s.tau_true}};
}

void parse_init(const json& j, SolverSettings& s) {
    check_keys(j, "init", {"method", "offset", "coarse_grid"});
    std::string method = "offset";
    read(j, "method", method, "init");
    if (method == "offset") s.init = InitMethod::offset;
    else if (method == "coarse_grid") s.init = InitMethod::coarse_grid;
    else throw ConfigError("init.method must be 'offset' or 'coarse_grid'");

    if (j.contains("offset")) {
        const auto& o = j.at("offset");
        check_keys(o, "init.offset", {"dx_m", "dy_m", "p0_dbm", "b_m"});
        read_number(o, "dx_m", s.offset.dx, "init.offset");
        read_number(o, "dy_m", s.offset.dy, "init.offset");
        read_number(o, "p0_dbm", s.offset.p0, "init.offset");
        read_number(o, "b_m", s.offset.b, "init.offset");
    }
    if (j.contains("coarse_grid")) {
        const auto& c = j.at("coarse_grid");
        check_keys(c, "init.coarse_grid", {"points_per_axis", "margin_m", "p0_dbm", "b_m"});
        read(c, "points_per_axis", s.coarse.points_per_axis, "init.coarse_grid");
        read_number(c, "margin_m", s.coarse.margin, "init.coarse_grid");
        read_number(c, "p0_dbm", s.coarse.p0, "init.coarse_grid");
        read_number(c, "b_m", s.coarse.b, "init.coarse_grid");
    }
}

void parse_grid(const json& j, GridSettings& g) {
    check_keys(j, "grid",
               {"center", "xy_half_span_m", "xy_half_span_per_radius", "p0_half_span_db",
                "b_half_span_m", "xy_interval_m", "p0_interval_db", "b_interval_m", "parallel"});
    if (j.contains("center")) {
        const auto& c = j.at("center");
        if (c.is_string() && c.get<std::string>() == "init") {
            g.center = GridCenter::init;
        } else if (c.is_array() && c.size() == 4
                   && std::all_of(c.begin(), c.end(), [](const json& v) { return v.is_number(); })) {
            g.center = GridCenter::fixed;
            g.fixed_center = {c[0].get<double>(), c[1].get<double>(), c[2].get<double>(),
                              c[3].get<double>()};
        } else {
            throw ConfigError("grid.center must be \"init\" or [x_m, y_m, p0_dbm, b_m]");
        }
    }
    if (j.contains("xy_half_span_m")) {
        double v = 0.0;
        read_number(j, "xy_half_span_m", v, "grid");
        g.xy_half_span = v;
    }
    read_number(j, "xy_half_span_per_radius", g.xy_half_span_per_radius, "grid");
    read_number(j, "p0_half_span_db", g.p0_half_span, "grid");
    read_number(j, "b_half_span_m", g.b_half_span, "grid");
    read_number(j, "xy_interval_m", g.xy_interval, "grid");
    read_number(j, "p0_interval_db", g.p0_interval, "grid");
    read_number(j, "b_interval_m", g.b_interval, "grid");
    read(j, "parallel", g.parallel, "grid");
}

std::vector<SolverKind> parse_solver_list(const json& j) {
    if (!j.is_array()) throw ConfigError("'solvers' must be a list of solver names");
    std::vector<SolverKind> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw ConfigError("'solvers' entries must be strings");
        const auto k = parse_solver_kind(v.get<std::string>());
        if (!k) throw ConfigError("unknown solver '" + v.get<std::string>() + "'");
        if (std::find(out.begin(), out.end(), *k) == out.end()) out.push_back(*k);
    }
    return out;
}

ExperimentConfig parse_config_object(const json& root) {
    check_keys(root, "<root>", {"scenario", "signal", "init", "grid", "gd", "pso", "solvers"});
    ExperimentConfig cfg;

    if (root.contains("scenario")) {
        const auto& s = root.at("scenario");
        check_keys(s, "scenario",
                   {"radii_m", "trials_per_radius", "n_receivers", "target_m", "master_seed",
                    "warmup"});
        read(s, "radii_m", cfg.radii, "scenario");
        read(s, "trials_per_radius", cfg.trials_per_radius, "scenario");
        read(s, "n_receivers", cfg.n_receivers, "scenario");
        if (s.contains("target_m")) cfg.target = read_point(s.at("target_m"), "scenario.target_m");
        read_seed(s, "master_seed", cfg.master_seed, "scenario");
        read(s, "warmup", cfg.warmup, "scenario");
    }
    if (root.contains("signal")) cfg.signal = parse_signal(root.at("signal"));
    if (root.contains("init")) parse_init(root.at("init"), cfg.solvers);
    if (root.contains("grid")) parse_grid(root.at("grid"), cfg.solvers.grid);
    if (root.contains("gd")) {
        const auto& g = root.at("gd");
        check_keys(g, "gd", {"gamma", "max_iters", "grad_tol"});
        read_number(g, "gamma", cfg.solvers.gd.gamma, "gd");
        read(g, "max_iters", cfg.solvers.gd.max_iters, "gd");
        if (g.contains("grad_tol") && !g.at("grad_tol").is_null()) {
            double tol = 0.0;
            read_number(g, "grad_tol", tol, "gd");
            cfg.solvers.gd.grad_tol = tol;
        }
    }
    if (root.contains("pso")) {
        const auto& p = root.at("pso");
        check_keys(p, "pso", {"max_iters", "swarm_size", "inertia", "c1", "c2", "seed"});
        auto& ps = cfg.solvers.pso;
        read(p, "max_iters", ps.max_iters, "pso");
        read(p, "swarm_size", ps.swarm_size, "pso");
        read_number(p, "inertia", ps.inertia, "pso");
        read_number(p, "c1", ps.c1, "pso");
        read_number(p, "c2", ps.c2, "pso");
        read_seed(p, "seed", ps.seed, "pso");
    }
    if (root.contains("solvers")) cfg.solvers.enabled = parse_solver_list(root.at("solvers"));
    return cfg;
}

json config_json(const ExperimentConfig& cfg) {
    const auto& s = cfg.solvers;
    json grid = {{"xy_half_span_per_radius", s.grid.xy_half_span_per_radius},
                 {"p0_half_span_db", s.grid.p0_half_span},
                 {"b_half_span_m", s.grid.b_half_span},
                 {"xy_interval_m", s.grid.xy_interval},
                 {"p0_interval_db", s.grid.p0_interval},
                 {"b_interval_m", s.grid.b_interval},
                 {"parallel", s.grid.parallel}};
    if (s.grid.center == GridCenter::init) {
        grid["center"] = "init";
    } else {
        const auto& c = s.grid.fixed_center;
        grid["center"] = json::array({c.x, c.y, c.p0, c.b});
    }
    if (s.grid.xy_half_span) grid["xy_half_span_m"] = *s.grid.xy_half_span;

    json gd = {{"gamma", s.gd.gamma}, {"max_iters", s.gd.max_iters}, {"grad_tol", nullptr}};
    if (s.gd.grad_tol) gd["grad_tol"] = *s.gd.grad_tol;

    json solvers = json::array();
    for (auto k : s.enabled) solvers.push_back(std::string(to_string(k)));

    return {
        {"scenario",
         {{"radii_m", cfg.radii},
          {"trials_per_radius", cfg.trials_per_radius},
          {"n_receivers", cfg.n_receivers},
          {"target_m", point_json(cfg.target)},
          {"master_seed", cfg.master_seed},
          {"warmup", cfg.warmup}}},
        {"signal", signal_json(cfg.signal)},
        {"init",
         {{"method", s.init == InitMethod::offset ? "offset" : "coarse_grid"},
          {"offset",
           {{"dx_m", s.offset.dx}, {"dy_m", s.offset.dy}, {"p0_dbm", s.offset.p0}, {"b_m", s.offset.b}}},
          {"coarse_grid",
           {{"points_per_axis", s.coarse.points_per_axis},
            {"margin_m", s.coarse.margin},
            {"p0_dbm", s.coarse.p0},
            {"b_m", s.coarse.b}}}}},
        {"grid", grid},
        {"gd", gd},
        {"pso",
         {{"max_iters", s.pso.max_iters},
          {"swarm_size", s.pso.swarm_size},
          {"inertia", s.pso.inertia},
          {"c1", s.pso.c1},
          {"c2", s.pso.c2},
          {"seed", s.pso.seed}}},
        {"solvers", solvers},
    };
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<double> read_number_list(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj.at(key).is_array())
        throw ConfigError(std::string("measurements.") + key + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& v : obj.at(key)) {
        if (!v.is_number()) throw ConfigError(std::string("measurements.") + key + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    const json root = parse_json(json_text);
    ExperimentConfig cfg;
    if (root.is_object() && root.contains("tool") && root.contains("config"))
        cfg = parse_config_object(root.at("config"));
    else
        cfg = parse_config_object(root);
    try {
        cfg.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(read_text_file(path));
}

std::string dump_experiment_config(const ExperimentConfig& cfg) {
    return config_json(cfg).dump(2) + "\n";
}

ScenarioFixture parse_scenario_fixture(const std::string& json_text) {
    const json root = parse_json(json_text);
    check_keys(root, "<root>", {"format", "scenario", "seed", "measurements"});
    if (!root.contains("scenario") || !root.contains("measurements"))
        throw ConfigError("scenario file needs 'scenario' and 'measurements' sections");

    ScenarioFixture f;
    const auto& s = root.at("scenario");
    check_keys(s, "scenario", {"target_m", "receivers_m", "signal"});
    if (s.contains("target_m")) f.scenario.target = read_point(s.at("target_m"), "scenario.target_m");
    if (!s.contains("receivers_m") || !s.at("receivers_m").is_array())
        throw ConfigError("scenario.receivers_m must be a list of [x, y] pairs");
    for (const auto& r : s.at("receivers_m"))
        f.scenario.receivers.push_back(read_point(r, "scenario.receivers_m entry"));
    if (s.contains("signal")) f.scenario.signal = parse_signal(s.at("signal"));
    read_seed(root, "seed", f.seed, "<root>");

    const auto& m = root.at("measurements");
    check_keys(m, "measurements", {"rss_dbm", "toa_s"});
    f.measurements.rss = read_number_list(m, "rss_dbm");
    f.measurements.toa = read_number_list(m, "toa_s");

    try {
        f.scenario.validate();
        f.measurements.validate(f.scenario.receivers.size());
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid scenario file: ") + e.what());
    }
    return f;
}

ScenarioFixture load_scenario_fixture(const std::filesystem::path& path) {
    return parse_scenario_fixture(read_text_file(path));
}

std::string dump_scenario_fixture(const ScenarioFixture& f) {
    json receivers = json::array();
    for (const auto& r : f.scenario.receivers) receivers.push_back(point_json(r));
    const json root = {
        {"format", "rsstoa-scenario/1"},
        {"scenario",
         {{"target_m", point_json(f.scenario.target)},
          {"receivers_m", receivers},
          {"signal", signal_json(f.scenario.signal)}}},
        {"seed", f.seed},
        {"measurements", {{"rss_dbm", f.measurements.rss}, {"toa_s", f.measurements.toa}}},
    };
    return root.dump(2) + "\n";
}

std::string errors_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "solver,radius,trial,seed,error_m,evaluations\n";
    for (const auto& t : report.trials) {
        for (const auto& o : t.outcomes) {
            os << to_string(o.solver) << ',' << format_double(t.radius) << ',' << t.trial << ','
               << t.seed << ',' << format_double(o.ok ? o.error_m : std::nan("")) << ','
               << (o.ok ? o.evaluations : 0) << '\n';
        }
    }
    return os.str();
}

std::string timings_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "solver,radius,trial,time_s\n";
    for (const auto& t : report.trials)
        for (const auto& o : t.outcomes)
            os << to_string(o.solver) << ',' << format_double(t.radius) << ',' << t.trial << ','
               << format_double(o.time_s) << '\n';
    return os.str();
}

std::string cdf_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "solver,error_m,fraction\n";
    for (const auto& s : report.summaries) {
        if (s.errors.empty()) continue;
        for (const auto& [e, f] : cdf_points(s.errors))
            os << to_string(s.solver) << ',' << format_double(e) << ',' << format_double(f) << '\n';
    }
    return os.str();
}

std::string summary_csv(const ExperimentReport& report) {
    std::ostringstream os;
    os << "solver,rmse_m,p80_m,p95_m,mean_time_s,failures\n";
    for (const auto& s : report.summaries)
        os << to_string(s.solver) << ',' << format_double(s.rmse) << ',' << format_double(s.p80)
           << ',' << format_double(s.p95) << ',' << format_double(s.mean_time_s) << ','
           << s.failures << '\n';
    return os.str();
}

std::vector<ErrorRow> parse_errors_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "solver,radius,trial,seed,error_m,evaluations")
        throw ConfigError("errors.csv: unexpected header");
    std::vector<ErrorRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 6) throw ConfigError("errors.csv: expected 6 fields in '" + line + "'");
        try {
            ErrorRow r;
            r.solver = f[0];
            r.radius = std::stod(f[1]);
            r.trial = std::stoi(f[2]);
            r.seed = std::stoull(f[3]);
            r.error_m = f[4] == "nan" ? std::nan("") : std::stod(f[4]);
            r.evaluations = std::stoull(f[5]);
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw ConfigError("errors.csv: malformed row '" + line + "'");
        }
    }
    return rows;
}

std::string dump_manifest(const RunManifest& m) {
    const json root = {
        {"tool", "rsstoa"},
        {"version", m.tool_version},
        {"master_seed", m.master_seed},
        {"timestamp", m.timestamp},
        {"outputs", m.outputs},
        {"config", config_json(m.config)},
    };
    return root.dump(2) + "\n";
}

}  // namespace rsstoa
