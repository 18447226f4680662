#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "muxdyn/coupling.hpp"
#include "muxdyn/dynamics.hpp"
#include "muxdyn/error.hpp"
#include "muxdyn/generators.hpp"
#include "muxdyn/manifest.hpp"
#include "muxdyn/spectral.hpp"
#include "muxdyn/stats.hpp"

namespace muxdyn::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kDefaultGen = "100,9,er:0.05/ba:3/ws:6:0.1";

struct Source {
    std::string input;
    std::string gen;
    std::uint64_t seed = 0;
};

struct GenSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<GeneratorSpec> mix;
};

std::size_t parse_count(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used == s.size()) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw InputError(std::string("invalid ") + what + " '" + s + "'");
}

GenSpec parse_gen(const std::string& text) {
    const auto a = text.find(',');
    const auto b = a == std::string::npos ? a : text.find(',', a + 1);
    if (b == std::string::npos) throw InputError("--gen expects n,k,mix (got '" + text + "')");
    GenSpec g;
    g.n = parse_count(text.substr(0, a), "node count");
    g.k = parse_count(text.substr(a + 1, b - a - 1), "layer count");
    g.mix = parse_generator_mix(text.substr(b + 1));
    if (g.k == 0 || g.mix.empty() || g.k % g.mix.size() != 0) {
        throw InputError("generator mix of length " + std::to_string(g.mix.size()) + " does not divide k=" +
                         std::to_string(g.k));
    }
    for (const auto& s : g.mix) validate(s, g.n);
    return g;
}

std::pair<std::uint64_t, std::uint64_t> parse_seeds(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const auto s = parse_count(text, "seed");
        return {s, s};
    }
    const auto lo = parse_count(text.substr(0, dots), "seed");
    const auto hi = parse_count(text.substr(dots + 2), "seed");
    if (hi < lo) throw InputError("empty seed range '" + text + "'");
    return {lo, hi};
}

Multiplex load_source(const Source& s) {
    if (s.input.empty() == s.gen.empty()) throw InputError("give exactly one of --input and --gen");
    if (!s.input.empty()) return load_multiplex(s.input);
    const auto g = parse_gen(s.gen);
    return random_multiplex(g.n, g.k, g.mix, s.seed);
}

json source_json(const Source& s) {
    json j;
    if (!s.input.empty()) {
        j["input"] = s.input;
    } else {
        j["gen"] = s.gen;
    }
    j["seed"] = s.seed;
    return j;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    fs::create_directories(dir);
    const auto path = fs::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path.string());
    f << content;
    if (!f) throw InputError("failed writing " + path.string());
}

/// Primary output goes to stdout when no directory is given.
void emit(const std::string& dir, const std::string& name, const std::string& content, std::ostream& out) {
    if (dir.empty()) {
        out << content;
    } else {
        write_file(dir, name, content);
    }
}

void emit_config(const std::string& dir, const std::string& name, const json& config) {
    if (!dir.empty()) write_file(dir, name, config.dump(2) + "\n");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// stats ---------------------------------------------------------------------

struct StatsArgs {
    Source source;
    std::string out;
    std::string transitivity = "cyclic";
    std::string reciprocity = "mutual_per_arc";
};

StatsOptions stats_options(const std::string& t, const std::string& r) {
    return {parse_transitivity(t), parse_reciprocity(r)};
}

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
    const auto m = load_source(a.source);
    const auto report = stats_report(m, stats_options(a.transitivity, a.reciprocity));
    const auto checks = verify_bounds(report);

    json config = {{"command", "stats"},
                   {"source", source_json(a.source)},
                   {"transitivity", a.transitivity},
                   {"reciprocity", a.reciprocity}};
    json bounds = {{"config", config}, {"checks", to_json(checks)}};
    emit(a.out, "stats.csv", to_csv(report), out);
    emit_config(a.out, "stats.config.json", config);
    if (!a.out.empty()) write_file(a.out, "bounds.json", bounds.dump(2) + "\n");

    int code = ok;
    for (const auto& c : checks) {
        if (c.asserted && !c.holds) {
            err << "bound failed: " << c.claim << " (" << c.lhs << " vs " << c.rhs << ")\n";
            code = property_failed;
        }
    }
    return code;
}

// figure2 -------------------------------------------------------------------

struct Figure2Args {
    std::string gen = kDefaultGen;
    std::string seeds = "1..20";
    std::string out;
    std::size_t jobs = 0;
    std::string transitivity = "cyclic";
    std::string reciprocity = "mutual_per_arc";
};

struct SeedResult {
    std::uint64_t seed = 0;
    std::string rows;
    std::vector<BoundCheck> checks;
    std::string error;
};

SeedResult figure2_seed(const GenSpec& g, std::uint64_t seed, const StatsOptions& options) {
    SeedResult r;
    r.seed = seed;
    const auto m = random_multiplex(g.n, g.k, g.mix, seed);
    const auto report = stats_report(m, options);
    r.checks = verify_bounds(report);

    const auto add = [&](const StatRow& row) {
        const std::string prefix = std::to_string(seed) + "," + row.graph + ",";
        r.rows += prefix + "density," + (row.density ? fmt(*row.density) : "") + "\n";
        r.rows += prefix + "transitivity," + fmt(row.transitivity) + "\n";
        r.rows += prefix + "mean_degree," + fmt(row.mean_degree) + "\n";
        r.rows += prefix + "avg_path_length," + (row.avg_path_length ? fmt(*row.avg_path_length) : "") + "\n";
    };
    for (const auto& row : report.per_layer) add(row);
    add(report.aggregate);
    add(report.matched_sum);
    return r;
}

int cmd_figure2(const Figure2Args& a, std::ostream& out, std::ostream& err) {
    const auto g = parse_gen(a.gen);
    const auto [lo, hi] = parse_seeds(a.seeds);
    const auto options = stats_options(a.transitivity, a.reciprocity);
    const std::size_t count = static_cast<std::size_t>(hi - lo + 1);
    std::vector<SeedResult> results(count);

    std::size_t jobs = a.jobs ? a.jobs : std::max(1U, std::thread::hardware_concurrency());
    jobs = std::min(jobs, count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                results[i] = figure2_seed(g, lo + i, options);
            } catch (const std::exception& e) {
                results[i].seed = lo + i;
                results[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::string csv = "seed,graph,statistic,value\n";
    std::map<std::string, std::pair<bool, std::size_t>> holds;  // claim -> (asserted, count)
    json failures = json::array();
    int code = ok;
    for (const auto& r : results) {
        if (!r.error.empty()) throw NumericalError("seed " + std::to_string(r.seed) + ": " + r.error);
        csv += r.rows;
        for (const auto& c : r.checks) {
            auto& h = holds[c.claim];
            h.first = c.asserted;
            h.second += c.holds ? 1 : 0;
            if (c.asserted && !c.holds) {
                failures.push_back({{"seed", r.seed}, {"claim", c.claim}, {"lhs", c.lhs}, {"rhs", c.rhs}});
                err << "seed " << r.seed << ": bound failed: " << c.claim << "\n";
                code = property_failed;
            }
        }
    }
    json claims = json::array();
    for (const auto& [claim, h] : holds) {
        claims.push_back({{"claim", claim}, {"asserted", h.first}, {"holds", h.second}, {"seeds", count}});
    }
    json config = {{"command", "figure2"},
                   {"gen", a.gen},
                   {"seeds", a.seeds},
                   {"transitivity", a.transitivity},
                   {"reciprocity", a.reciprocity}};
    emit(a.out, "figure2.csv", csv, out);
    emit_config(a.out, "figure2.config.json", config);
    if (!a.out.empty()) {
        write_file(a.out, "figure2_bounds.json",
                   json{{"config", config}, {"claims", claims}, {"failures", failures}}.dump(2) + "\n");
    }
    return code;
}

// spectrum ------------------------------------------------------------------

struct SpectrumArgs {
    Source source;
    std::string coupling = "equidistribution";
    std::string dynamics = "laplacian";
    std::string checks;
    std::size_t l = 1;
    double tol = 1e-8;
    std::string out;
};

bool layers_primitive(const MultiplexOperator& op) {
    const auto& idx = op.dynamics.index();
    for (std::size_t l = 0; l < idx.k; ++l) {
        const SupraMatrix block({idx.n, 1}, SupraKind::layer_dynamics, op.dynamics.block(l, l));
        const auto pattern = nonzero_pattern(block);
        if (!strongly_connected(pattern) || pattern_period(pattern) != 1) return false;
    }
    return true;
}

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
    const auto m = load_source(a.source);
    const auto kind = parse_dynamics(a.dynamics);
    const auto scheme = scheme_from_spec(m, a.coupling);
    const auto op = make_operator(m, scheme, kind);

    json config = {{"command", "spectrum"},   {"source", source_json(a.source)}, {"coupling", a.coupling},
                   {"dynamics", a.dynamics}, {"checks", a.checks},              {"tol", a.tol}};
    json report;
    report["config"] = config;
    report["operator"] = {{"dim", op.op.dim()}, {"closed", scheme.is_closed()}, {"dense", op.op.is_dense()}};
    report["summary"] = to_json(spectrum(op.op));
    const auto props = check_matrix_properties(op.op);
    report["properties"] = to_json(props);

    json checks = json::array();
    bool failed = false;
    const auto assert_check = [&](const std::string& name, bool passed, json detail) {
        detail["check"] = name;
        detail["passed"] = passed;
        checks.push_back(detail);
        if (!passed) {
            failed = true;
            err << "check failed: " << name << "\n";
        }
    };

    for (const auto& name : split(a.checks, ',')) {
        if (name == "prop1") {
            const auto c = check_prop1(m, kind, a.tol);
            assert_check(name, c.passed, to_json(c));
        } else if (name == "prop2") {
            if (kind != DynamicsKind::random_walk || !scheme.is_closed()) {
                throw InputError("prop2 needs --dynamics random_walk and a closed coupling");
            }
            bool positive = true;
            for (std::size_t i = 0; i < m.layer_count(); ++i)
                for (std::size_t l = 0; l < m.layer_count(); ++l)
                    for (std::size_t j = 0; j < m.size(); ++j) positive = positive && scheme.c(i, l, j) > 0.0;
            const bool implied = positive && layers_primitive(op);
            const bool passed = props.stochastic && (!implied || (props.irreducible && props.primitive));
            assert_check(name, passed, {{"properties", to_json(props)}, {"primitivity_implied", implied}});
        } else if (name == "prop3") {
            const auto p = check_prop3(m);
            assert_check(name, p.passed, to_json(p));
        } else if (name == "prop4") {
            for (const auto& b : check_prop4(m)) assert_check(name + ":" + b.claim, b.holds, to_json(b));
        } else if (name == "general") {
            const auto b = check_general_bound(m, a.l);
            assert_check(name, b.holds, to_json(b));
        } else if (name == "centrality") {
            const auto c = eigenvector_centrality(m, scheme, true);
            json j = {{"eigenvalue", c.eigenvalue},
                      {"per_node", std::vector<double>(c.per_node.data(), c.per_node.data() + c.per_node.size())}};
            checks.push_back({{"check", name}, {"reported", j}});
        } else {
            throw InputError("unknown check '" + name + "' (expected prop1, prop2, prop3, prop4, general, centrality)");
        }
    }
    report["checks"] = checks;
    report["passed"] = !failed;
    emit(a.out, "spectrum.json", report.dump(2) + "\n", out);
    return failed ? property_failed : ok;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
    Source source;
    std::string coupling = "equidistribution";
    std::string dynamics;
    std::string mode = "walk";
    std::string start;
    double K = 1.0;
    double dt = 1e-3;
    double T = 10.0;
    double tol = 1e-10;
    std::size_t max_steps = 1'000'000;
    std::string out;
};

std::size_t find_label(const Multiplex& m, const std::string& label) {
    const auto& labels = m.labels();
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InputError("unknown node '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
}

std::size_t find_layer(const Multiplex& m, const std::string& name) {
    for (std::size_t i = 0; i < m.layer_count(); ++i)
        if (m.layer(i).name() == name) return i;
    throw InputError("unknown layer '" + name + "'");
}

Vector start_state(const Multiplex& m, const std::string& spec, bool reduced) {
    const auto n = m.size();
    const auto dim = reduced ? n : n * m.layer_count();
    if (spec == "uniform") return Vector::Constant(static_cast<Eigen::Index>(dim), 1.0 / static_cast<double>(dim));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    const auto parts = split(spec, ':');
    if (reduced && parts.size() == 2 && parts[0] == "node") {
        v(static_cast<Eigen::Index>(find_label(m, parts[1]))) = 1.0;
        return v;
    }
    if (!reduced && parts.size() == 3 && parts[0] == "copy") {
        const SupraIndex idx{n, m.layer_count()};
        v(static_cast<Eigen::Index>(idx.flatten(find_layer(m, parts[1]), find_label(m, parts[2])))) = 1.0;
        return v;
    }
    throw InputError("invalid start '" + spec + "' (expected uniform, " +
                     (reduced ? "node:<label>)" : "copy:<layer>:<label>)"));
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const auto m = load_source(a.source);
    json config = {{"command", "simulate"}, {"source", source_json(a.source)}, {"coupling", a.coupling},
                   {"mode", a.mode}};
    Trajectory t;
    std::vector<std::string> labels;
    std::string start = a.start;
    if (a.mode == "walk") {
        const auto kind = parse_dynamics(a.dynamics.empty() ? "random_walk" : a.dynamics);
        if (start.empty()) start = "uniform";
        const auto op = make_operator(m, scheme_from_spec(m, a.coupling), kind);
        t = walk_stationary(op.op, start_state(m, start, false), {a.tol, a.max_steps, 1000});
        labels = supra_labels(m);
        config["dynamics"] = to_string(kind);
        config["tol"] = a.tol;
        config["max_steps"] = a.max_steps;
    } else if (a.mode == "diffuse" || a.mode == "diffuse_reduced") {
        const DiffusionOptions d{a.K, a.dt, a.T, 1000, 0.5};
        if (a.mode == "diffuse") {
            const auto kind = parse_dynamics(a.dynamics.empty() ? "laplacian" : a.dynamics);
            if (start.empty()) start = "copy:" + m.layer(0).name() + ":" + m.labels().front();
            const auto op = make_operator(m, scheme_from_spec(m, a.coupling), kind);
            t = diffuse(op.op, start_state(m, start, false), d);
            labels = supra_labels(m);
            config["dynamics"] = to_string(kind);
        } else {
            if (start.empty()) start = "node:" + m.labels().front();
            t = diffuse_reduced(m, start_state(m, start, true), d);
            labels = m.labels();
        }
        config["K"] = a.K;
        config["dt"] = a.dt;
        config["T"] = a.T;
    } else {
        throw InputError("unknown mode '" + a.mode + "' (expected walk, diffuse or diffuse_reduced)");
    }
    config["start"] = start;

    json summary = summary_json(t);
    summary["config"] = config;
    emit(a.out, "trajectory.csv", to_csv(t, labels), out);
    if (!a.out.empty()) write_file(a.out, "summary.json", summary.dump(2) + "\n");
    if (!t.converged) {
        err << "walk did not converge within " << a.max_steps << " steps (residual " << t.final_residual << ")\n";
        return numerical_error;
    }
    return ok;
}

void add_source(CLI::App* cmd, Source& s) {
    cmd->add_option("--input", s.input, "Layer manifest (.json or .tsv)");
    cmd->add_option("--gen", s.gen, "Random multiplex n,k,mix, e.g. 100,9,er:0.05/ba:3/ws:6:0.1");
    cmd->add_option("--seed", s.seed, "Generator seed")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiplex dynamics operators, statistics and simulations"};
    app.name("muxdyn");
    app.require_subcommand(1);

    StatsArgs stats;
    auto* s = app.add_subcommand("stats", "Global statistics per layer, aggregate and matched sum");
    add_source(s, stats.source);
    s->add_option("--out", stats.out, "Output directory (stdout when omitted)");
    s->add_option("--transitivity", stats.transitivity, "cyclic | symmetrized")->capture_default_str();
    s->add_option("--reciprocity", stats.reciprocity, "mutual_per_arc | arc_fraction | dyadic | correlation")
        ->capture_default_str();

    Figure2Args fig;
    auto* f = app.add_subcommand("figure2", "Statistics sweep over random multiplexes");
    f->add_option("--gen", fig.gen, "n,k,mix")->capture_default_str();
    f->add_option("--seeds", fig.seeds, "Seed range a..b")->capture_default_str();
    f->add_option("--jobs", fig.jobs, "Worker threads (0: hardware concurrency)");
    f->add_option("--out", fig.out, "Output directory (stdout when omitted)");
    f->add_option("--transitivity", fig.transitivity)->capture_default_str();
    f->add_option("--reciprocity", fig.reciprocity)->capture_default_str();

    SpectrumArgs spec;
    auto* p = app.add_subcommand("spectrum", "Operator spectrum and structural checks");
    add_source(p, spec.source);
    p->add_option("--coupling", spec.coupling, "Preset or JSON file")->capture_default_str();
    p->add_option("--dynamics", spec.dynamics, "adjacency | random_walk | laplacian")->capture_default_str();
    p->add_option("--check", spec.checks, "Comma list: prop1, prop2, prop3, prop4, general, centrality");
    p->add_option("--l", spec.l, "Index for the general bound")->capture_default_str();
    p->add_option("--tol", spec.tol, "Spectral matching tolerance")->capture_default_str();
    p->add_option("--out", spec.out, "Output directory (stdout when omitted)");

    SimulateArgs sim;
    auto* m = app.add_subcommand("simulate", "Walk to stationarity or diffuse");
    add_source(m, sim.source);
    m->add_option("--coupling", sim.coupling, "Preset or JSON file")->capture_default_str();
    m->add_option("--dynamics", sim.dynamics, "Defaults to random_walk for walks, laplacian for diffusion");
    m->add_option("--mode", sim.mode, "walk | diffuse | diffuse_reduced")->capture_default_str();
    m->add_option("--start", sim.start, "uniform | copy:<layer>:<label> | node:<label>");
    m->add_option("--K", sim.K, "Diffusion constant")->capture_default_str();
    m->add_option("--dt", sim.dt, "Euler step")->capture_default_str();
    m->add_option("--T", sim.T, "Horizon")->capture_default_str();
    m->add_option("--tol", sim.tol, "Walk convergence tolerance (1-norm)")->capture_default_str();
    m->add_option("--max-steps", sim.max_steps, "Walk step limit")->capture_default_str();
    m->add_option("--out", sim.out, "Output directory (stdout when omitted)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    try {
        if (s->parsed()) return cmd_stats(stats, out, err);
        if (f->parsed()) return cmd_figure2(fig, out, err);
        if (p->parsed()) return cmd_spectrum(spec, out, err);
        return cmd_simulate(sim, out, err);
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return numerical_error;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
}

}  // namespace muxdyn::cli
