// dcp: contact process with a density-dependent birth rate - simulation and
// analysis CLI. Every artifact embeds its fully resolved configuration and
// seed; `dcp regen` rebuilds any such artifact byte-identically. Exit codes:
// 0 success, 2 configuration error, 3 runtime error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "dcp/coupling.hpp"
#include "dcp/engine.hpp"
#include "dcp/experiments.hpp"
#include "dcp/io.hpp"
#include "dcp/meanfield.hpp"
#include "dcp/replicate.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace dcp;

namespace {

// ---------------------------------------------------------------------------
// Resolved configuration: ordered key/value strings. Runners read only from
// here, artifacts embed it, regen parses it back.
// ---------------------------------------------------------------------------

struct ConfigBlock {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, format_g17(value)); }
    void add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }

    bool has(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return true;
        return false;
    }
    const std::string& get(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return v;
        throw DomainError("missing: " + key);
    }
    double get_double(const std::string& key) const { return std::stod(get(key)); }
    std::int64_t get_int(const std::string& key) const { return std::stoll(get(key)); }
    std::uint64_t get_seed() const { return std::stoull(get("seed")); }

    std::vector<std::string> comment_lines() const {
        std::vector<std::string> lines;
        lines.push_back("dcp " + subcommand);
        for (const auto& [k, v] : entries) lines.push_back(k + " = " + v);
        return lines;
    }
    json to_json() const {
        json j;
        j["subcommand"] = subcommand;
        for (const auto& [k, v] : entries) j[k] = v;
        return j;
    }
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> values;
    if (text.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream ss(text);
        if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':')
            throw DomainError("grid: expected start:stop:step, got '" + text + "'");
        if (!(step > 0.0)) throw DomainError("grid: step must be positive");
        for (int k = 0;; ++k) {
            const double v = start + k * step;
            if (v > stop + step / 2.0) break;
            values.push_back(v);
        }
    } else {
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) values.push_back(std::stod(part));
        }
    }
    if (values.empty()) throw DomainError("grid: '" + text + "' holds no values");
    return values;
}

int default_side(int d) { return d == 1 ? 400 : d == 2 ? 128 : 16; }

Params params_from(const ConfigBlock& cfg) {
    const double lambda = cfg.get_double("lambda");
    const double a = cfg.get_double("a");
    const int d = static_cast<int>(cfg.get_int("d"));
    const std::string variant = cfg.has("variant") ? cfg.get("variant") : "auto";
    const bool a_minus_inf = std::isinf(a) && a < 0;
    if (variant == "hardcore" || (variant == "auto" && a_minus_inf)) {
        if (!a_minus_inf) throw DomainError("variant hardcore requires a = -inf");
        return Params::hard_core(lambda, d);
    }
    if (variant == "floor") return Params::floor_rate(lambda, a, d);
    if (variant == "standard" || variant == "auto") return Params::standard(lambda, a, d);
    throw DomainError("variant: expected auto|standard|floor|hardcore");
}

TorusGeometry geometry_from(const ConfigBlock& cfg) {
    const int d = static_cast<int>(cfg.get_int("d"));
    const int side = static_cast<int>(cfg.get_int("side"));
    const Boundary b = cfg.has("boundary") && cfg.get("boundary") == "frozen"
                           ? Boundary::EmptyFrozen
                           : Boundary::Periodic;
    return TorusGeometry::cubic(side, d, b);
}

experiments::InitKind init_from(const ConfigBlock& cfg) {
    const std::string init = cfg.get("init");
    if (init == "single") return experiments::InitKind::SingleSeed;
    if (init == "full") return experiments::InitKind::FullTorus;
    if (init == "box") return experiments::InitKind::Box;
    throw DomainError("init: expected single|full|box");
}

std::optional<EventMode> mode_from(const ConfigBlock& cfg) {
    const std::string mode = cfg.has("mode") ? cfg.get("mode") : "auto";
    if (mode == "auto") return {};
    if (mode == "player") return EventMode::PlayerCentric;
    if (mode == "transition") return EventMode::TransitionDirect;
    throw DomainError("mode: expected auto|player|transition");
}

// ---------------------------------------------------------------------------
// Artifact writers
// ---------------------------------------------------------------------------

struct Outputs {
    fs::path dir;
    std::vector<std::string> written;

    fs::path file(const std::string& name) {
        fs::create_directories(dir);
        written.push_back(name);
        return dir / name;
    }
};

void write_csv(Outputs& out, const std::string& name, const ConfigBlock& cfg,
               const std::string& header, const std::vector<std::string>& rows,
               const std::vector<std::string>& extra_comments = {}) {
    std::ofstream os(out.file(name), std::ios::binary);
    for (const auto& line : cfg.comment_lines()) os << "# " << line << "\n";
    for (const auto& line : extra_comments) os << "# " << line << "\n";
    os << header << "\n";
    for (const auto& row : rows) os << row << "\n";
}

void write_json_file(Outputs& out, const std::string& name, const ConfigBlock& cfg,
                     json payload) {
    json root;
    root["config"] = cfg.to_json();
    for (auto& [k, v] : payload.items()) root[k] = v;
    std::ofstream os(out.file(name), std::ios::binary);
    os << root.dump(2) << "\n";
}

std::string estimate_csv(const Estimate& e) {
    return format_g17(e.value) + "," + format_g17(e.ci_low) + "," + format_g17(e.ci_high);
}

// ---------------------------------------------------------------------------
// Runners (one per subcommand); all inputs come from the ConfigBlock.
// ---------------------------------------------------------------------------

int run_simulate(const ConfigBlock& cfg, Outputs& out) {
    const Params params = params_from(cfg);
    const TorusGeometry geo = geometry_from(cfg);
    const auto init_sites = experiments::make_init(geo, init_from(cfg));
    const double horizon = cfg.get_double("horizon");
    const EventMode mode = mode_from(cfg).value_or(resolve_mode(params));
    const std::uint64_t seed = cfg.get_seed();
    const std::uint64_t replicate = cfg.has("replicate") ? std::stoull(cfg.get("replicate")) : 0;

    SimState state(params, geo, init_sites, seed, replicate, mode);
    StopRule stop;
    stop.horizon = horizon;
    stop.stop_on_extinction = true;

    std::vector<double> snapshot_times;
    if (cfg.has("snapshot") && !cfg.get("snapshot").empty())
        snapshot_times = parse_grid(cfg.get("snapshot"));
    double record_dt = cfg.get_double("record-dt");
    if (record_dt <= 0.0) record_dt = horizon > 0.0 ? horizon / 100.0 : 1.0;

    std::set<double> grid;
    for (double t = 0.0; t <= horizon; t += record_dt) grid.insert(t);
    grid.insert(horizon);
    for (double t : snapshot_times) {
        if (t < 0.0 || t > horizon)
            throw DomainError("snapshot: time outside [0, horizon]");
        grid.insert(t);
    }
    const std::set<double> want_snapshot(snapshot_times.begin(), snapshot_times.end());

    std::vector<std::string> rows;
    Recorder rec;
    rec.times.assign(grid.begin(), grid.end());
    rec.on_sample = [&](const SimState& st, double t, const RunTallies& tallies) {
        rows.push_back(format_g17(t) + "," + std::to_string(st.config().occupied_count()) +
                       "," + std::to_string(tallies.births) + "," +
                       std::to_string(tallies.deaths));
        if (want_snapshot.count(t)) {
            const std::string stem = "snapshot_t" + format_g17(t);
            {
                std::ofstream os(out.file(stem + ".txt"), std::ios::binary);
                write_occupancy(os, st.config(), t);
            }
            if (st.geometry().dim() == 2) {
                std::ofstream os(out.file(stem + ".pgm"), std::ios::binary);
                write_pgm(os, st.config(), cfg.comment_lines());
            }
        }
    };

    const RunOutcome outcome = run(state, stop, &rec);
    write_csv(out, "trajectory.csv", cfg, "time,population,births,deaths", rows);

    json payload;
    payload["reason"] = to_string(outcome.reason);
    payload["final_time"] = outcome.final_time;
    payload["extinction_time"] =
        outcome.extinction_time ? json(*outcome.extinction_time) : json(nullptr);
    payload["final_population"] = state.config().occupied_count();
    payload["max_population"] = outcome.max_population;
    payload["ever_occupied_count"] = outcome.ever_occupied_count;
    payload["events"] = {{"births", outcome.tallies.births},
                         {"deaths", outcome.tallies.deaths},
                         {"coalescences", outcome.tallies.coalescences},
                         {"total", outcome.event_count}};
    payload["resolved_mode"] = to_string(mode);
    write_json_file(out, "outcome.json", cfg, payload);
    return 0;
}

int run_survival(const ConfigBlock& cfg, Outputs& out, int workers) {
    const Params params = params_from(cfg);
    const TorusGeometry geo = geometry_from(cfg);
    const auto est = experiments::estimate_survival(
        params, geo, init_from(cfg), cfg.get_double("horizon"), cfg.get_int("replicates"),
        cfg.get_seed(), workers, mode_from(cfg));
    write_csv(out, "survival.csv", cfg, experiments::survival_csv_header(),
              {format_g17(params.lambda) + "," + format_g17(params.payoff) + "," +
               estimate_csv(est) + "," + std::to_string(est.replicates)});
    return 0;
}

int run_phase(const ConfigBlock& cfg, Outputs& out, int workers) {
    const TorusGeometry geo = geometry_from(cfg);
    const auto cells = experiments::phase_scan(
        parse_grid(cfg.get("lambda-grid")), parse_grid(cfg.get("a-grid")), geo, init_from(cfg),
        cfg.get_double("horizon"), cfg.get_int("replicates"), cfg.get_seed(), workers);
    std::vector<std::string> rows;
    for (const auto& c : cells)
        rows.push_back(std::to_string(c.i) + "," + std::to_string(c.j) + "," +
                       format_g17(c.lambda) + "," + format_g17(c.a) + "," +
                       estimate_csv(c.estimate) + "," + std::to_string(c.estimate.replicates));
    write_csv(out, "phase.csv", cfg, experiments::phase_csv_header(), rows);
    return 0;
}

int run_lambda_c(const ConfigBlock& cfg, Outputs& out, int workers) {
    const TorusGeometry geo = geometry_from(cfg);
    experiments::LambdaCSettings settings;
    settings.horizon = cfg.get_double("horizon");
    settings.replicates = cfg.get_int("replicates");
    settings.threshold = cfg.get_double("threshold");
    settings.bracket_width = cfg.get_double("width");
    settings.initial_lo = cfg.get_double("lo");
    settings.initial_hi = cfg.get_double("hi");
    settings.workers = workers;
    if (cfg.has("lambda-c0") && !std::isnan(cfg.get_double("lambda-c0")))
        settings.lambda_c0 = cfg.get_double("lambda-c0");
    const auto bracket =
        experiments::estimate_lambda_c(cfg.get_double("a"), geo, cfg.get_seed(), settings);
    json payload;
    payload["a"] = bracket.a;
    payload["lo"] = bracket.lo;
    payload["hi"] = bracket.hi;
    payload["note"] = bracket.note;
    payload["measured_lambda_c0"] = bracket.measured_lambda_c0;
    payload["sandwich_lo"] = bracket.sandwich_lo;
    payload["sandwich_hi"] = bracket.sandwich_hi;
    write_json_file(out, "lambda_c.json", cfg, payload);
    return 0;
}

int run_meanfield(const ConfigBlock& cfg, Outputs& out) {
    namespace mf = meanfield;
    const std::string curve = cfg.has("curve") ? cfg.get("curve") : "";
    if (curve == "ac") {
        std::vector<std::string> rows;
        for (double lambda : parse_grid(cfg.get("lambda-grid")))
            rows.push_back(format_g17(lambda) + "," + format_g17(mf::a_critical(lambda)));
        write_csv(out, "ac_curve.csv", cfg, "lambda,a_c", rows);
        return 0;
    }
    if (!curve.empty()) throw DomainError("curve: expected 'ac'");
    const double lambda = cfg.get_double("lambda");
    const double a = cfg.get_double("a");
    if (cfg.has("integrate") && cfg.get("integrate") == "true") {
        const auto traj = mf::integrate(lambda, a, cfg.get_double("u0"),
                                        cfg.get_double("t-end"), cfg.get_double("step"));
        std::vector<std::string> rows;
        for (const auto& p : traj) rows.push_back(format_g17(p.t) + "," + format_g17(p.u));
        write_csv(out, "mf_trajectory.csv", cfg, "t,u", rows);
        return 0;
    }
    const auto report = mf::fixed_points(lambda, a);
    std::string u_minus, u_plus;
    for (const auto& fp : report.fixed_points) {
        if (fp.u == 0.0) continue;
        if (fp.stability == mf::Stability::Unstable && u_minus.empty())
            u_minus = format_g17(fp.u);
        if (fp.stability != mf::Stability::Unstable) u_plus = format_g17(fp.u);
    }
    write_csv(out, "meanfield.csv", cfg, "lambda,a,regime,u_minus,u_plus",
              {format_g17(lambda) + "," + format_g17(a) + "," + to_string(report.regime) + "," +
               u_minus + "," + u_plus});
    return 0;
}

int run_couple(const ConfigBlock& cfg, Outputs& out, int workers) {
    const std::string kind = cfg.get("kind");
    const TorusGeometry geo = geometry_from(cfg);
    const double horizon = cfg.get_double("horizon");
    const std::int64_t runs = cfg.get_int("runs");
    const std::uint64_t seed = cfg.get_seed();
    if (runs <= 0) throw DomainError("runs: need at least one");

    json payload;
    if (kind == "noninteracting") {
        const int seeds = static_cast<int>(cfg.get_int("seeds"));
        if (seeds < 1) throw DomainError("seeds: need at least one site");
        std::vector<Site> sites;
        std::vector<int> c(static_cast<std::size_t>(geo.dim()), 0);
        for (int i = 0; i < seeds; ++i) {
            c[0] = i;
            sites.push_back(geo.site_of(c));
        }
        const double lambda = cfg.get_double("lambda");
        const auto reports = run_replicates(runs, workers, [&](std::int64_t r) {
            return evolve_vs_noninteracting(sites, lambda, geo, horizon, seed,
                                            static_cast<std::uint64_t>(r));
        });
        std::uint64_t violations = 0;
        std::int64_t runs_with = 0;
        int max_stack = 0;
        for (const auto& rep : reports) {
            violations += rep.violations;
            runs_with += rep.violations > 0 ? 1 : 0;
            max_stack = std::max(max_stack, rep.max_copy_stack);
        }
        payload["runs"] = runs;
        payload["violations"] = violations;
        payload["runs_with_violations"] = runs_with;
        payload["max_copy_stack"] = max_stack;
        write_json_file(out, "couple.json", cfg, payload);
        return 0;
    }

    const auto init_sites = experiments::make_init(geo, init_from(cfg));
    std::vector<double> trace;
    if (cfg.has("trace-dt") && cfg.get_double("trace-dt") > 0.0)
        for (double t = 0.0; t <= horizon; t += cfg.get_double("trace-dt")) trace.push_back(t);

    auto one_run = [&](std::int64_t r) -> ContainmentReport {
        const auto stream = static_cast<std::uint64_t>(r);
        if (kind == "pair") {
            ConfigBlock p1cfg, p2cfg;
            p1cfg.add("lambda", cfg.get("lambda1"));
            p1cfg.add("a", cfg.get("a1"));
            p1cfg.add("d", cfg.get("d"));
            p2cfg.add("lambda", cfg.get("lambda2"));
            p2cfg.add("a", cfg.get("a2"));
            p2cfg.add("d", cfg.get("d"));
            return evolve_coupled_pair(params_from(p1cfg), params_from(p2cfg), init_sites,
                                       init_sites, geo, horizon, seed, stream, trace);
        }
        if (kind == "sandwich") {
            return evolve_sandwich(cfg.get_double("lambda"), cfg.get_double("a"), geo,
                                   init_sites, horizon, seed, stream, trace);
        }
        throw DomainError("kind: expected pair|sandwich|noninteracting");
    };

    const auto reports = run_replicates(runs, workers, one_run);
    std::uint64_t violations = 0, threshold_violations = 0;
    std::int64_t runs_with = 0;
    json first = nullptr;
    for (std::int64_t r = 0; r < runs; ++r) {
        const auto& rep = reports[static_cast<std::size_t>(r)];
        violations += rep.violations;
        threshold_violations += rep.threshold_violations;
        if (rep.violations > 0) {
            ++runs_with;
            if (first.is_null() && rep.first_violation)
                first = {{"run", r},
                         {"site", rep.first_violation->first},
                         {"time", rep.first_violation->second}};
        }
    }
    payload["runs"] = runs;
    payload["violations"] = violations;
    payload["threshold_violations"] = threshold_violations;
    payload["runs_with_violations"] = runs_with;
    payload["first_violation"] = first;
    const auto& r0 = reports.front();
    payload["run0"] = {{"final_population", r0.final_population},
                       {"max_population", r0.max_population},
                       {"events", r0.events}};
    if (!trace.empty()) {
        payload["run0"]["trace_times"] = r0.trace_times;
        payload["run0"]["population_traces"] = r0.population_traces;
    }
    write_json_file(out, "couple.json", cfg, payload);
    return 0;
}

int run_hardcore(const ConfigBlock& cfg, Outputs& out, int workers) {
    const auto stats = experiments::hardcore_stats(
        cfg.get_double("lambda"), cfg.get_int("replicates"), cfg.get_seed(), workers,
        static_cast<int>(cfg.get_int("side")), static_cast<int>(cfg.get_int("d")));
    std::vector<std::string> rows;
    for (const auto& row : experiments::hardcore_tail_table(stats))
        rows.push_back(std::to_string(row.n) + "," + format_g17(row.empirical_tail) + "," +
                       format_g17(row.geometric_tail));
    double mean_t = 0.0;
    std::int64_t max_excess = std::numeric_limits<std::int64_t>::min();
    for (std::size_t i = 0; i < stats.extinction_times.size(); ++i) {
        mean_t += stats.extinction_times[i];
        max_excess = std::max(max_excess, stats.ever_occupied[i] - stats.generations[i] - 1);
    }
    mean_t /= static_cast<double>(stats.extinction_times.size());
    write_csv(out, "hardcore.csv", cfg, experiments::hardcore_csv_header(), rows,
              {"mean_extinction_time = " + format_g17(mean_t),
               "max_ever_minus_generations_minus_1 = " + std::to_string(max_excess)});
    return 0;
}

int run_blocks(const ConfigBlock& cfg, Outputs& out, int workers) {
    const std::string experiment = cfg.get("experiment");
    if (experiment == "doubling") {
        const auto res = experiments::doubling_probability(
            cfg.get_double("lambda"), parse_grid(cfg.get("a-grid")), cfg.get_double("epsilon"),
            static_cast<int>(cfg.get_int("d")), cfg.get_int("replicates"), cfg.get_seed(),
            workers, static_cast<int>(cfg.get_int("side")));
        std::vector<std::string> rows;
        for (std::size_t k = 0; k < res.a_values.size(); ++k)
            rows.push_back(format_g17(res.a_values[k]) + "," + estimate_csv(res.estimates[k]) +
                           "," + std::to_string(res.estimates[k].replicates) + "," +
                           format_g17(res.stage_bounds[k]) + "," +
                           format_g17(res.pipeline_bounds[k]));
        write_csv(out, "doubling.csv", cfg,
                  "a,estimate,ci_low,ci_high,replicates,stage_bound,pipeline_bound", rows,
                  {"tau = " + format_g17(res.tau),
                   "containment_violations = " + std::to_string(res.containment_violations),
                   "nesting_violations = " + std::to_string(res.nesting_violations)});
        return 0;
    }
    if (experiment == "empty") {
        const auto res = experiments::empty_block_probability(
            cfg.get_double("lambda"), cfg.get_double("a"), static_cast<int>(cfg.get_int("L")),
            static_cast<int>(cfg.get_int("d")), cfg.get_int("replicates"), cfg.get_seed(),
            workers);
        write_csv(out, "blocks_empty.csv", cfg,
                  "lambda,a,L,estimate,ci_low,ci_high,poisson_agreement",
                  {format_g17(res.lambda) + "," + format_g17(res.a) + "," +
                   std::to_string(res.L) + "," + estimate_csv(res.estimate) + "," +
                   format_g17(res.poisson_agreement)});
        return 0;
    }
    if (experiment == "bounds") {
        std::optional<double> tau;
        if (cfg.has("tau") && !std::isnan(cfg.get_double("tau"))) tau = cfg.get_double("tau");
        const auto rec = experiments::bounds(cfg.get_double("epsilon"),
                                             static_cast<int>(cfg.get_int("d")),
                                             cfg.get_double("lambda"), cfg.get_double("a"),
                                             static_cast<int>(cfg.get_int("L")), tau);
        json payload;
        payload["tau_from_epsilon"] = rec.tau_from_epsilon;
        payload["tau"] = rec.tau;
        payload["invasion_stage_bound"] = rec.invasion_stage_bound;
        payload["invasion_pipeline_bound"] = rec.invasion_pipeline_bound;
        payload["poisson_agreement"] = rec.poisson_agreement;
        write_json_file(out, "bounds.json", cfg, payload);
        return 0;
    }
    throw DomainError("experiment: expected doubling|empty|bounds");
}

int dispatch(const ConfigBlock& cfg, Outputs& out, int workers) {
    if (cfg.subcommand == "simulate") return run_simulate(cfg, out);
    if (cfg.subcommand == "survival") return run_survival(cfg, out, workers);
    if (cfg.subcommand == "phase") return run_phase(cfg, out, workers);
    if (cfg.subcommand == "lambda-c") return run_lambda_c(cfg, out, workers);
    if (cfg.subcommand == "meanfield") return run_meanfield(cfg, out);
    if (cfg.subcommand == "couple") return run_couple(cfg, out, workers);
    if (cfg.subcommand == "hardcore") return run_hardcore(cfg, out, workers);
    if (cfg.subcommand == "blocks") return run_blocks(cfg, out, workers);
    throw DomainError("unknown subcommand: " + cfg.subcommand);
}

// ---------------------------------------------------------------------------
// regen: parse the embedded config out of an artifact and re-run it.
// ---------------------------------------------------------------------------

ConfigBlock parse_embedded_config(const fs::path& artifact) {
    std::ifstream is(artifact, std::ios::binary);
    if (!is) throw DomainError("regen: cannot open " + artifact.string());
    std::string first_line;
    std::getline(is, first_line);
    ConfigBlock cfg;
    auto take_comment_lines = [&](std::istream& in) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("# ", 0) != 0) break;
            const std::string body = line.substr(2);
            if (body.rfind("dcp ", 0) == 0) {
                cfg.subcommand = body.substr(4);
            } else {
                const auto eq = body.find(" = ");
                if (eq != std::string::npos)
                    cfg.add(body.substr(0, eq), body.substr(eq + 3));
            }
        }
    };
    if (first_line == "P5") {
        take_comment_lines(is);
    } else if (!first_line.empty() && first_line[0] == '{') {
        is.seekg(0);
        json root = json::parse(is);
        if (!root.contains("config"))
            throw DomainError("regen: artifact has no embedded config");
        for (auto& [k, v] : root["config"].items()) {
            if (k == "subcommand")
                cfg.subcommand = v.get<std::string>();
            else
                cfg.add(k, v.get<std::string>());
        }
    } else if (first_line.rfind("# dcp ", 0) == 0) {
        cfg.subcommand = first_line.substr(6);
        take_comment_lines(is);
    } else {
        throw DomainError("regen: no embedded config found (bare occupancy dumps "
                          "are regenerated through their run's outcome.json)");
    }
    if (cfg.subcommand.empty()) throw DomainError("regen: embedded config lacks subcommand");
    return cfg;
}

int run_regen(const fs::path& artifact, const fs::path& out_dir, bool check, int workers) {
    const ConfigBlock cfg = parse_embedded_config(artifact);
    Outputs out;
    out.dir = check ? fs::temp_directory_path() / ("dcp_regen_" + std::to_string(::getpid()))
                    : out_dir;
    const int rc = dispatch(cfg, out, workers);
    if (rc != 0) return rc;
    if (!check) {
        std::cout << "regenerated from " << artifact.filename().string() << " into "
                  << out.dir.string() << "\n";
        return 0;
    }
    const fs::path regenerated = out.dir / artifact.filename();
    std::ifstream a(artifact, std::ios::binary), b(regenerated, std::ios::binary);
    if (!b) {
        std::cerr << "regen: run did not produce " << artifact.filename().string() << "\n";
        return 3;
    }
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    fs::remove_all(out.dir);
    if (sa.str() != sb.str()) {
        std::cerr << "regen: byte mismatch for " << artifact.filename().string() << "\n";
        return 3;
    }
    std::cout << "regen: " << artifact.filename().string() << " matches byte-for-byte\n";
    return 0;
}

struct RequiredCheck {
    CLI::App* sub;
    std::vector<std::pair<CLI::Option*, std::string>> options;
};

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"contact process with a density-dependent birth rate"};
    app.require_subcommand(1);
    app.set_config("--config", "", "configuration file (key = value, sections per subcommand)");

    std::uint64_t seed = 1;
    const char* env_out = std::getenv("DCP_OUT");
    std::string out_dir = env_out ? env_out : ".";
    int workers = default_workers();
    app.add_option("--seed", seed, "master seed (replicate r uses stream (seed, r))");
    app.add_option("--out", out_dir, "output directory (default $DCP_OUT or .)");
    app.add_option("--workers", workers, "worker threads; results do not depend on this");

    std::vector<RequiredCheck> required;
    auto require = [&](CLI::App* sub, CLI::Option* opt, const std::string& name) {
        for (auto& rc : required)
            if (rc.sub == sub) {
                rc.options.emplace_back(opt, name);
                return;
            }
        required.push_back({sub, {{opt, name}}});
    };

    // -- simulate ------------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "run one trajectory, write logs/snapshots");
    double sim_lambda = 0, sim_a = 0, sim_horizon = 2000, sim_record_dt = 0;
    int sim_d = 1, sim_side = 0;
    std::string sim_variant = "auto", sim_init = "single", sim_boundary = "periodic",
                sim_mode = "auto", sim_snapshot;
    std::uint64_t sim_replicate = 0;
    auto* sim_lambda_opt = simulate->add_option("--lambda", sim_lambda, "natural birth rate");
    simulate->add_option("--a", sim_a, "payoff coefficient (accepts -inf)");
    simulate->add_option("--variant", sim_variant, "auto|standard|floor|hardcore");
    simulate->add_option("--d", sim_d, "dimension");
    simulate->add_option("--side", sim_side, "torus side (0 = default for d)");
    simulate->add_option("--boundary", sim_boundary, "periodic|frozen");
    simulate->add_option("--init", sim_init, "single|full|box");
    simulate->add_option("--horizon", sim_horizon, "time horizon");
    simulate->add_option("--record-dt", sim_record_dt, "trajectory grid step (0 = horizon/100)");
    simulate->add_option("--snapshot", sim_snapshot, "snapshot times (grid or comma list)");
    simulate->add_option("--mode", sim_mode, "auto|player|transition");
    simulate->add_option("--replicate", sim_replicate, "stream id within the seed");
    require(simulate, sim_lambda_opt, "lambda");

    // -- survival ------------------------------------------------------------
    auto* survival = app.add_subcommand("survival", "horizon-censored survival estimate");
    double sur_lambda = 0, sur_a = 0, sur_horizon = 2000;
    int sur_d = 1, sur_side = 0;
    std::int64_t sur_replicates = 1000;
    std::string sur_init = "single", sur_mode = "auto", sur_variant = "auto";
    auto* sur_lambda_opt = survival->add_option("--lambda", sur_lambda, "natural birth rate");
    survival->add_option("--a", sur_a, "payoff coefficient (accepts -inf)");
    survival->add_option("--variant", sur_variant, "auto|standard|floor|hardcore");
    survival->add_option("--d", sur_d, "dimension");
    survival->add_option("--side", sur_side, "torus side (0 = default)");
    survival->add_option("--init", sur_init, "single|full|box");
    survival->add_option("--horizon", sur_horizon, "time horizon");
    survival->add_option("--replicates", sur_replicates, "Monte Carlo replicates");
    survival->add_option("--mode", sur_mode, "auto|player|transition");
    require(survival, sur_lambda_opt, "lambda");

    // -- phase ---------------------------------------------------------------
    auto* phase = app.add_subcommand("phase", "survival scan over a (lambda, a) grid");
    std::string ph_lambda_grid, ph_a_grid, ph_init = "single";
    double ph_horizon = 2000;
    int ph_d = 1, ph_side = 0;
    std::int64_t ph_replicates = 500;
    auto* ph_lg = phase->add_option("--lambda-grid", ph_lambda_grid, "start:stop:step or list");
    auto* ph_ag = phase->add_option("--a-grid", ph_a_grid, "start:stop:step or list");
    phase->add_option("--d", ph_d, "dimension");
    phase->add_option("--side", ph_side, "torus side (0 = default)");
    phase->add_option("--init", ph_init, "single|full|box");
    phase->add_option("--horizon", ph_horizon, "time horizon");
    phase->add_option("--replicates", ph_replicates, "replicates per cell");
    require(phase, ph_lg, "lambda-grid");
    require(phase, ph_ag, "a-grid");

    // -- lambda-c ------------------------------------------------------------
    auto* lambda_c = app.add_subcommand("lambda-c", "bracket the critical birth rate");
    double lc_a = 0, lc_horizon = 2000, lc_threshold = 0.02, lc_width = 0.05, lc_lo = 1,
           lc_hi = 6, lc_lambda_c0 = std::numeric_limits<double>::quiet_NaN();
    int lc_d = 1, lc_side = 0;
    std::int64_t lc_replicates = 500;
    lambda_c->add_option("--a", lc_a, "payoff coefficient");
    lambda_c->add_option("--d", lc_d, "dimension");
    lambda_c->add_option("--side", lc_side, "torus side (0 = default)");
    lambda_c->add_option("--horizon", lc_horizon, "time horizon");
    lambda_c->add_option("--replicates", lc_replicates, "replicates per evaluation");
    lambda_c->add_option("--threshold", lc_threshold, "survival threshold");
    lambda_c->add_option("--width", lc_width, "final bracket width");
    lambda_c->add_option("--lo", lc_lo, "initial lower lambda");
    lambda_c->add_option("--hi", lc_hi, "initial upper lambda");
    lambda_c->add_option("--lambda-c0", lc_lambda_c0, "measured a=0 value to reuse");

    // -- meanfield -----------------------------------------------------------
    auto* meanfield_cmd = app.add_subcommand("meanfield", "fixed points, a_c curve, ODE runs");
    double mf_lambda = 0, mf_a = 0, mf_u0 = 0.1, mf_t_end = 100, mf_step = 0.01;
    std::string mf_curve, mf_lambda_grid;
    bool mf_integrate = false;
    meanfield_cmd->add_option("--lambda", mf_lambda, "birth rate");
    meanfield_cmd->add_option("--a", mf_a, "payoff coefficient");
    meanfield_cmd->add_option("--curve", mf_curve, "'ac' for the critical payoff curve");
    meanfield_cmd->add_option("--lambda-grid", mf_lambda_grid, "grid for --curve ac");
    meanfield_cmd->add_flag("--integrate", mf_integrate, "integrate u' = phi(u)");
    meanfield_cmd->add_option("--u0", mf_u0, "initial density");
    meanfield_cmd->add_option("--t-end", mf_t_end, "integration end time");
    meanfield_cmd->add_option("--step", mf_step, "integration step");

    // -- couple --------------------------------------------------------------
    auto* couple = app.add_subcommand("couple", "coupled runs with containment checks");
    std::string cp_kind, cp_init = "single";
    double cp_lambda = 0, cp_a = 0, cp_lambda1 = 0, cp_a1 = 0, cp_lambda2 = 0, cp_a2 = 0,
           cp_horizon = 200, cp_trace_dt = 0;
    int cp_d = 1, cp_side = 0, cp_seeds = 2;
    std::int64_t cp_runs = 1000;
    couple->add_option("--kind", cp_kind, "pair|sandwich|noninteracting");
    bool cp_pair = false, cp_sandwich = false, cp_noninteracting = false;
    couple->add_flag("--pair", cp_pair, "shorthand for --kind pair");
    couple->add_flag("--sandwich", cp_sandwich, "shorthand for --kind sandwich");
    couple->add_flag("--noninteracting", cp_noninteracting, "shorthand for --kind noninteracting");
    couple->add_option("--lambda", cp_lambda, "birth rate (sandwich / noninteracting)");
    couple->add_option("--a", cp_a, "payoff (sandwich)");
    couple->add_option("--lambda1", cp_lambda1, "inner birth rate (pair)");
    couple->add_option("--a1", cp_a1, "inner payoff (pair, accepts -inf)");
    couple->add_option("--lambda2", cp_lambda2, "outer birth rate (pair)");
    couple->add_option("--a2", cp_a2, "outer payoff (pair)");
    couple->add_option("--seeds", cp_seeds, "adjacent seed sites (noninteracting)");
    couple->add_option("--d", cp_d, "dimension");
    couple->add_option("--side", cp_side, "torus side (0 = default)");
    couple->add_option("--init", cp_init, "single|full|box");
    couple->add_option("--horizon", cp_horizon, "time horizon");
    couple->add_option("--runs", cp_runs, "coupled runs");
    couple->add_option("--trace-dt", cp_trace_dt, "population trace grid step (0 = off)");

    // -- hardcore ------------------------------------------------------------
    auto* hardcore = app.add_subcommand("hardcore", "a = -infinity single-seed statistics");
    double hc_lambda = 0;
    std::int64_t hc_replicates = 100000;
    int hc_side = 128, hc_d = 1;
    auto* hc_lambda_opt = hardcore->add_option("--lambda", hc_lambda, "natural birth rate");
    hardcore->add_option("--replicates", hc_replicates, "replicates");
    hardcore->add_option("--side", hc_side, "torus side");
    hardcore->add_option("--d", hc_d, "dimension");
    require(hardcore, hc_lambda_opt, "lambda");

    // -- blocks --------------------------------------------------------------
    auto* blocks = app.add_subcommand("blocks", "block-construction experiments and bounds");
    std::string bl_experiment, bl_a_grid;
    double bl_lambda = 0, bl_a = 0, bl_epsilon = 0.1,
           bl_tau = std::numeric_limits<double>::quiet_NaN();
    int bl_d = 1, bl_L = 10, bl_side = 12;
    std::int64_t bl_replicates = 1000;
    auto* bl_exp_opt =
        blocks->add_option("--experiment", bl_experiment, "doubling|empty|bounds");
    blocks->add_option("--lambda", bl_lambda, "natural birth rate");
    blocks->add_option("--a", bl_a, "payoff (empty/bounds; accepts -inf)");
    blocks->add_option("--a-grid", bl_a_grid, "payoff grid (doubling)");
    blocks->add_option("--epsilon", bl_epsilon, "target failure probability");
    blocks->add_option("--tau", bl_tau, "override tau (bounds)");
    blocks->add_option("--L", bl_L, "block scale");
    blocks->add_option("--d", bl_d, "dimension");
    blocks->add_option("--side", bl_side, "torus side (doubling)");
    blocks->add_option("--replicates", bl_replicates, "replicates");
    require(blocks, bl_exp_opt, "experiment");

    // -- regen ---------------------------------------------------------------
    auto* regen = app.add_subcommand("regen", "regenerate an artifact from its embedded config");
    std::string rg_artifact;
    bool rg_check = false;
    auto* rg_opt = regen->add_option("artifact", rg_artifact, "artifact file");
    regen->add_flag("--check", rg_check, "regenerate into a temp dir and byte-compare");
    require(regen, rg_opt, "artifact");

    // global options (--seed/--out/--workers) may follow the subcommand
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        for (const auto& rc : required)
            if (rc.sub == active)
                for (const auto& [opt, name] : rc.options)
                    if (opt->count() == 0) {
                        std::cerr << "missing: " << name << "\n";
                        return 2;
                    }

        if (active == regen)
            return run_regen(rg_artifact, out_dir, rg_check, workers);

        ConfigBlock cfg;
        cfg.subcommand = active->get_name();
        cfg.add("seed", seed);
        if (active == simulate) {
            if (sim_side == 0) sim_side = default_side(sim_d);
            cfg.add("lambda", sim_lambda);
            cfg.add("a", sim_a);
            cfg.add("variant", sim_variant);
            cfg.add("d", sim_d);
            cfg.add("side", sim_side);
            cfg.add("boundary", sim_boundary);
            cfg.add("init", sim_init);
            cfg.add("horizon", sim_horizon);
            cfg.add("record-dt", sim_record_dt);
            cfg.add("snapshot", sim_snapshot);
            cfg.add("mode", sim_mode);
            cfg.add("replicate", sim_replicate);
        } else if (active == survival) {
            if (sur_side == 0) sur_side = default_side(sur_d);
            cfg.add("lambda", sur_lambda);
            cfg.add("a", sur_a);
            cfg.add("variant", sur_variant);
            cfg.add("d", sur_d);
            cfg.add("side", sur_side);
            cfg.add("init", sur_init);
            cfg.add("horizon", sur_horizon);
            cfg.add("replicates", sur_replicates);
            cfg.add("mode", sur_mode);
        } else if (active == phase) {
            if (ph_side == 0) ph_side = default_side(ph_d);
            cfg.add("lambda-grid", ph_lambda_grid);
            cfg.add("a-grid", ph_a_grid);
            cfg.add("d", ph_d);
            cfg.add("side", ph_side);
            cfg.add("init", ph_init);
            cfg.add("horizon", ph_horizon);
            cfg.add("replicates", ph_replicates);
        } else if (active == lambda_c) {
            if (lc_side == 0) lc_side = default_side(lc_d);
            cfg.add("a", lc_a);
            cfg.add("d", lc_d);
            cfg.add("side", lc_side);
            cfg.add("horizon", lc_horizon);
            cfg.add("replicates", lc_replicates);
            cfg.add("threshold", lc_threshold);
            cfg.add("width", lc_width);
            cfg.add("lo", lc_lo);
            cfg.add("hi", lc_hi);
            cfg.add("lambda-c0", lc_lambda_c0);
        } else if (active == meanfield_cmd) {
            if (!mf_curve.empty()) {
                cfg.add("curve", mf_curve);
                if (mf_lambda_grid.empty()) {
                    std::cerr << "missing: lambda-grid\n";
                    return 2;
                }
                cfg.add("lambda-grid", mf_lambda_grid);
            } else {
                if (meanfield_cmd->count("--lambda") == 0) {
                    std::cerr << "missing: lambda\n";
                    return 2;
                }
                cfg.add("lambda", mf_lambda);
                cfg.add("a", mf_a);
                cfg.add("integrate", mf_integrate ? "true" : "false");
                if (mf_integrate) {
                    cfg.add("u0", mf_u0);
                    cfg.add("t-end", mf_t_end);
                    cfg.add("step", mf_step);
                }
            }
        } else if (active == couple) {
            if (cp_pair + cp_sandwich + cp_noninteracting > 1) {
                std::cerr << "couple: choose one of --pair/--sandwich/--noninteracting\n";
                return 2;
            }
            if (cp_kind.empty())
                cp_kind = cp_pair             ? "pair"
                          : cp_sandwich       ? "sandwich"
                          : cp_noninteracting ? "noninteracting"
                                              : "";
            if (cp_kind.empty()) {
                std::cerr << "missing: kind\n";
                return 2;
            }
            if (cp_side == 0) cp_side = default_side(cp_d);
            cfg.add("kind", cp_kind);
            cfg.add("d", cp_d);
            cfg.add("side", cp_side);
            cfg.add("horizon", cp_horizon);
            cfg.add("runs", cp_runs);
            if (cp_kind == "pair") {
                cfg.add("lambda1", cp_lambda1);
                cfg.add("a1", cp_a1);
                cfg.add("lambda2", cp_lambda2);
                cfg.add("a2", cp_a2);
                cfg.add("init", cp_init);
                cfg.add("trace-dt", cp_trace_dt);
            } else if (cp_kind == "sandwich") {
                cfg.add("lambda", cp_lambda);
                cfg.add("a", cp_a);
                cfg.add("init", cp_init);
                cfg.add("trace-dt", cp_trace_dt);
            } else {
                cfg.add("lambda", cp_lambda);
                cfg.add("seeds", cp_seeds);
            }
        } else if (active == hardcore) {
            cfg.add("lambda", hc_lambda);
            cfg.add("replicates", hc_replicates);
            cfg.add("side", hc_side);
            cfg.add("d", hc_d);
        } else if (active == blocks) {
            cfg.add("experiment", bl_experiment);
            cfg.add("lambda", bl_lambda);
            if (bl_experiment == "doubling") {
                if (bl_a_grid.empty()) {
                    std::cerr << "missing: a-grid\n";
                    return 2;
                }
                cfg.add("a-grid", bl_a_grid);
                cfg.add("epsilon", bl_epsilon);
                cfg.add("side", bl_side);
            } else if (bl_experiment == "empty") {
                cfg.add("a", bl_a);
                cfg.add("L", bl_L);
            } else {
                cfg.add("a", bl_a);
                cfg.add("epsilon", bl_epsilon);
                cfg.add("L", bl_L);
                cfg.add("tau", bl_tau);
            }
            cfg.add("d", bl_d);
            cfg.add("replicates", bl_replicates);
        }

        std::cout << "seed = " << seed << "\n";
        Outputs out;
        out.dir = out_dir;
        const int rc = dispatch(cfg, out, workers);
        for (const auto& name : out.written)
            std::cout << "wrote " << (out.dir / name).string() << "\n";
        return rc;
    } catch (const DomainError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ParameterOrderError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}
