#include "aoii/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "aoii/errors.hpp"
#include "aoii/format.hpp"
#include "aoii/metrics.hpp"
#include "aoii/simulate.hpp"
#include "aoii/sources.hpp"
#include "aoii/sweep.hpp"

namespace aoii::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string one_line(std::string s) {
    for (char &c : s)
        if (c == '\n' || c == '\r')
            c = ';';
    return s;
}

struct Options {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string figure;
};

// ---------------------------------------------------------------- config --

json load_json_text(const std::string &text, const std::string &origin) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded())
        throw ConfigError(origin + ": not valid JSON");
    return parsed;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void apply_overrides(json &cfg, const std::vector<std::string> &sets) {
    for (const std::string &kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--set expects key=value, got '" + kv + "'");
        std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        for (char &c : key)
            if (c == '.')
                c = '/';
        json parsed = json::parse(value, nullptr, false);
        if (parsed.is_discarded())
            parsed = value; // plain string
        cfg[json::json_pointer("/" + key)] = parsed;
    }
}

json load_config(const Options &opt) {
    if (opt.config_path.empty())
        throw ConfigError("missing --config <path>");
    json cfg = load_json_text(slurp(opt.config_path), opt.config_path);
    if (!cfg.is_object())
        throw ConfigError("config root must be a JSON object");
    if (opt.seed)
        cfg["sim"]["seed"] = *opt.seed;
    apply_overrides(cfg, opt.sets);
    return cfg;
}

// ---------------------------------------------------------------- source --

Mat json_to_matrix(const json &rows, const std::string &origin) {
    if (!rows.is_array() || rows.empty())
        throw ConfigError(origin + ": matrix must be a nonempty array of rows");
    const std::size_t n = rows.size();
    Mat m(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const json &row = rows[i];
        if (!row.is_array())
            throw ConfigError(origin + ": row " + std::to_string(i) +
                              " is not an array");
        if (i == 0)
            m.resize(n, row.size());
        if (row.size() != static_cast<std::size_t>(m.cols()))
            throw ConfigError(origin + ": row " + std::to_string(i) +
                              " has inconsistent length");
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!row[j].is_number())
                throw ConfigError(origin + ": entry (" + std::to_string(i) +
                                  "," + std::to_string(j) + ") is not a number");
            m(i, j) = row[j].get<double>();
        }
    }
    return m;
}

Mat parse_text_matrix(const std::string &text, const std::string &origin) {
    std::vector<std::vector<double>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::vector<double> row;
        double v;
        while (fields >> v)
            row.push_back(v);
        if (!fields.eof() && fields.fail()) {
            std::string bad;
            fields.clear();
            fields >> bad;
            throw ConfigError(origin + ": cannot parse '" + bad +
                              "' as a number");
        }
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ConfigError(origin + ": no matrix rows found");
    Mat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw ConfigError(origin + ": row " + std::to_string(i) +
                              " has inconsistent length");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

json matrix_to_json(const Mat &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Accepts an inline array of rows, a bundled source name (q1|q2|q3), or a
// file path (JSON array of rows, or whitespace-separated text). Inlines the
// resolved matrix back into the config.
GeneratorMatrix resolve_source(json &cfg) {
    if (!cfg.contains("source"))
        throw ConfigError("missing 'source'");
    const json &src = cfg["source"];
    GeneratorMatrix q = [&] {
        if (src.is_array())
            return validate_generator(json_to_matrix(src, "source"));
        if (src.is_string()) {
            const std::string name = src.get<std::string>();
            if (name == "q1" || name == "q2" || name == "q3")
                return bench::by_name(name);
            const std::string text = slurp(name);
            json parsed = json::parse(text, nullptr, false);
            if (!parsed.is_discarded())
                return validate_generator(json_to_matrix(parsed, name));
            return validate_generator(parse_text_matrix(text, name));
        }
        throw ConfigError(
            "'source' must be an array of rows, a source name, or a path");
    }();
    cfg["source"] = matrix_to_json(q.q());
    return q;
}

// ----------------------------------------------------------------- model --

ChannelModel resolve_channel(json &cfg) {
    ChannelModel channel;
    if (cfg.contains("channel")) {
        if (!cfg["channel"].is_object())
            throw ConfigError("'channel' must be an object");
        if (cfg["channel"].contains("mu")) {
            if (!cfg["channel"]["mu"].is_number())
                throw ConfigError("channel.mu must be a number");
            channel.mu = cfg["channel"]["mu"].get<double>();
        }
    }
    cfg["channel"]["mu"] = channel.mu;
    validate(channel);
    return channel;
}

struct ModelCfg {
    bool push = true;
    std::vector<int> ks; // push only, >= 1 entries
    json params;         // theta / lambda spec in its config form
};

ModelCfg resolve_model(json &cfg) {
    if (!cfg.contains("model") || !cfg["model"].is_object())
        throw ConfigError("missing 'model' object");
    json &model = cfg["model"];
    const bool has_push = model.contains("push");
    const bool has_pull = model.contains("pull");
    if (has_push == has_pull)
        throw ConfigError("'model' must contain exactly one of push | pull");

    ModelCfg out;
    out.push = has_push;
    json &block = model[has_push ? "push" : "pull"];
    if (!block.is_object())
        throw ConfigError(std::string("model.") +
                          (has_push ? "push" : "pull") + " must be an object");

    if (has_push) {
        json k = block.value("k", json(1));
        if (k.is_number_integer())
            k = json::array({k.get<int>()});
        if (!k.is_array() || k.empty())
            throw ConfigError("model.push.k must be an integer or a nonempty "
                              "array of integers");
        for (const json &v : k) {
            if (!v.is_number_integer())
                throw ConfigError("model.push.k entries must be integers");
            out.ks.push_back(v.get<int>());
        }
        block["k"] = k;
        if (block.contains("theta"))
            out.params = block["theta"];
    } else {
        out.ks = {1};
        if (block.contains("lambda"))
            out.params = block["lambda"];
    }
    return out;
}

GridAxis parse_axis(const json &j, const std::string &what) {
    if (!j.is_object() || !j.contains("lo") || !j.contains("count"))
        throw ConfigError(what + " must be an object with lo, hi, count");
    GridAxis ax;
    ax.lo = j["lo"].get<double>();
    ax.hi = j.value("hi", ax.lo);
    ax.count = j["count"].get<int>();
    ax.log_spaced = j.value("log", true);
    return ax;
}

json axis_to_json(const GridAxis &ax) {
    return json{{"lo", ax.lo},
                {"hi", ax.hi},
                {"count", ax.count},
                {"log", ax.log_spaced}};
}

// Parameter points for analyze/simulate. A scalar broadcasts to one uniform
// policy; an object with lo/hi/count (or "values") yields a list of uniform
// policies; an N-element array is a single per-state policy.
struct ParamPoints {
    bool uniform = true;
    std::vector<double> values; // uniform value per policy (when uniform)
    std::vector<Vec> vectors;   // per-state parameters, one per policy
};

ParamPoints resolve_points(const json &p, int n, const std::string &what) {
    ParamPoints out;
    auto add_uniform = [&](double v) {
        out.values.push_back(v);
        out.vectors.push_back(Vec::Constant(n, v));
    };
    if (p.is_null())
        throw ConfigError("missing " + what);
    if (p.is_number()) {
        add_uniform(p.get<double>());
        return out;
    }
    if (p.is_array()) {
        if (static_cast<int>(p.size()) != n)
            throw ConfigError(what + ": array form is one value per state (" +
                              std::to_string(n) +
                              " expected); use {\"values\": [...]} for a "
                              "list of uniform points");
        Vec v(n);
        for (int i = 0; i < n; ++i) {
            if (!p[i].is_number())
                throw ConfigError(what + ": entries must be numbers");
            v[i] = p[i].get<double>();
        }
        out.uniform = false;
        out.vectors.push_back(std::move(v));
        return out;
    }
    if (p.is_object()) {
        if (p.contains("values")) {
            if (!p["values"].is_array() || p["values"].empty())
                throw ConfigError(what + ".values must be a nonempty array");
            for (const json &v : p["values"]) {
                if (!v.is_number())
                    throw ConfigError(what + ".values entries must be numbers");
                add_uniform(v.get<double>());
            }
            return out;
        }
        for (double v : parse_axis(p, what).points())
            add_uniform(v);
        return out;
    }
    throw ConfigError(what + ": expected a number, array, or object");
}

// ------------------------------------------------------------------- sim --

std::uint64_t json_count(const json &v, const std::string &what) {
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() > 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_number_float() && v.get<double>() > 0 &&
        std::floor(v.get<double>()) == v.get<double>())
        return static_cast<std::uint64_t>(v.get<double>());
    throw ConfigError(what + " must be a positive integer");
}

SimConfig resolve_sim(json &cfg) {
    SimConfig sim;
    json &block = cfg["sim"];
    if (!block.is_object())
        block = json::object();
    if (block.contains("cycles") && block.contains("time"))
        throw ConfigError("sim: specify either cycles or time, not both");
    if (block.contains("time")) {
        sim.horizon = Horizon::time(block["time"].get<double>());
        block["time"] = sim.horizon.time_target;
    } else {
        sim.horizon = Horizon::cycles(
            block.contains("cycles") ? json_count(block["cycles"], "sim.cycles")
                                     : sim.horizon.cycle_target);
        block["cycles"] = sim.horizon.cycle_target;
    }
    if (block.contains("seed"))
        sim.seed = json_count(block["seed"], "sim.seed");
    if (block.contains("warmup"))
        sim.warmup = block["warmup"].get<double>();
    if (block.contains("replications"))
        sim.replications = static_cast<int>(
            json_count(block["replications"], "sim.replications"));
    block["seed"] = sim.seed;
    block["warmup"] = sim.warmup;
    block["replications"] = sim.replications;
    validate(sim);
    return sim;
}

SweepSpec resolve_sweep(json &cfg, const ModelCfg &model, int n) {
    if (!cfg.contains("sweep") || !cfg["sweep"].is_object())
        throw ConfigError("missing 'sweep' object");
    json &block = cfg["sweep"];
    if (!block.contains("axes"))
        throw ConfigError("missing sweep.axes");

    SweepSpec spec;
    spec.model = model.push ? SweepSpec::Model::Push : SweepSpec::Model::Pull;
    if (model.push) {
        if (model.ks.size() != 1)
            throw ConfigError("sweep requires a single model.push.k");
        spec.erlang_k = model.ks[0];
    }
    const json &axes = block["axes"];
    if (axes.is_object()) {
        spec.axes.assign(n, parse_axis(axes, "sweep.axes"));
    } else if (axes.is_array() && axes.size() == 1) {
        spec.axes.assign(n, parse_axis(axes[0], "sweep.axes[0]"));
    } else if (axes.is_array() && static_cast<int>(axes.size()) == n) {
        for (int i = 0; i < n; ++i)
            spec.axes.push_back(
                parse_axis(axes[i], "sweep.axes[" + std::to_string(i) + "]"));
    } else {
        throw ConfigError("sweep.axes must be one axis or one per state");
    }
    json resolved = json::array();
    for (const GridAxis &ax : spec.axes)
        resolved.push_back(axis_to_json(ax));
    block["axes"] = resolved;
    if (block.contains("budget")) {
        if (!block["budget"].is_number())
            throw ConfigError("sweep.budget must be a number");
        spec.budget = block["budget"].get<double>();
    }
    validate(spec, n);
    return spec;
}

// --------------------------------------------------------------- outputs --

std::ofstream open_out(const fs::path &dir, const std::string &name) {
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write " + path.string());
    return out;
}

void note_artifact(std::ostream &out, const fs::path &dir,
                   const std::string &name) {
    out << "wrote " << (dir / name).string() << '\n';
}

void write_resolved(json cfg, const std::string &action, const fs::path &dir,
                    const std::string &name, std::ostream &chat) {
    cfg["action"] = action;
    std::ofstream out = open_out(dir, name);
    out << cfg.dump(2) << '\n';
    note_artifact(chat, dir, name);
}

void metric_header(std::ostream &out, bool push, bool uniform, int n,
                   bool with_se, const char *version) {
    out << "# " << version << '\n';
    if (push)
        out << "k,";
    if (uniform) {
        out << (push ? "theta_mean" : "lambda");
    } else {
        const char *stem = push ? "theta_" : "lambda_";
        for (int i = 0; i < n; ++i)
            out << (i ? "," : "") << stem << (i + 1);
    }
    out << ",aoii,rate";
    if (with_se)
        out << ",aoii_se,rate_se,cycles";
    out << '\n';
}

void metric_params(std::ostream &out, bool push, int k, bool uniform,
                   double value, const Vec &vec) {
    if (push)
        out << k << ',';
    if (uniform) {
        out << g17(value);
    } else {
        for (int i = 0; i < vec.size(); ++i)
            out << (i ? "," : "") << g17(vec[i]);
    }
}

// --------------------------------------------------------------- actions --

void run_analyze(const GeneratorMatrix &q, const ChannelModel &channel,
                 const ModelCfg &model, std::ostream &csv) {
    const ParamPoints points = resolve_points(
        model.params, q.size(), model.push ? "model.push.theta" : "model.pull.lambda");
    metric_header(csv, model.push, points.uniform, q.size(), false,
                  "aoii-analyze-csv v1");
    for (int k : model.ks) {
        for (std::size_t i = 0; i < points.vectors.size(); ++i) {
            SystemMetrics m;
            if (model.push)
                m = analyze(q, PushPolicy{k, points.vectors[i]}, channel);
            else
                m = analyze(q, PullPolicy{points.vectors[i]}, channel);
            metric_params(csv, model.push, k, points.uniform,
                          points.uniform ? points.values[i] : 0,
                          points.vectors[i]);
            csv << ',' << g17(m.aoii) << ',' << g17(m.rate) << '\n';
        }
    }
}

void run_simulate(const GeneratorMatrix &q, const ChannelModel &channel,
                  const ModelCfg &model, SimConfig sim, json &cfg,
                  const fs::path &out_dir, std::ostream &csv,
                  std::ostream &chat) {
    const ParamPoints points = resolve_points(
        model.params, q.size(), model.push ? "model.push.theta" : "model.pull.lambda");

    std::ofstream trace;
    if (cfg["sim"].contains("trace")) {
        if (model.ks.size() * points.vectors.size() != 1)
            throw ConfigError("sim.trace requires a single policy point");
        const std::string name = cfg["sim"]["trace"].get<std::string>();
        trace = open_out(out_dir, name);
        trace << "time,event,x,xhat,aoii\n";
        sim.trace = &trace;
        note_artifact(chat, out_dir, name);
    }

    metric_header(csv, model.push, points.uniform, q.size(), true,
                  "aoii-simulate-csv v1");
    const std::uint64_t base_seed = sim.seed;
    std::uint64_t flat = 0;
    for (int k : model.ks) {
        for (std::size_t i = 0; i < points.vectors.size(); ++i, ++flat) {
            // Distinct, reproducible streams per grid point.
            sim.seed = base_seed + flat * std::uint64_t(sim.replications);
            SimResult r;
            if (model.push)
                r = simulate_push(q, PushPolicy{k, points.vectors[i]}, channel,
                                  sim);
            else
                r = simulate_pull(q, PullPolicy{points.vectors[i]}, channel,
                                  sim);
            metric_params(csv, model.push, k, points.uniform,
                          points.uniform ? points.values[i] : 0,
                          points.vectors[i]);
            csv << ',' << g17(r.aoii_hat) << ',' << g17(r.rate_hat) << ','
                << g17(r.aoii_se) << ',' << g17(r.rate_se) << ',' << r.cycles
                << '\n';
        }
    }
}

void write_argmin_csv(std::ostream &out, const SweepResult &result,
                      const std::vector<double> &budgets, int n) {
    out << "# aoii-argmin-csv v1\n";
    out << "budget";
    for (int i = 0; i < n; ++i)
        out << ",param_" << (i + 1);
    out << ",aoii,rate\n";
    for (double budget : budgets) {
        const auto idx = select_argmin(
            result.rows, std::isinf(budget)
                             ? std::optional<double>()
                             : std::optional<double>(budget));
        if (!idx)
            continue;
        const SweepRow &r = result.rows[*idx];
        out << g17(budget);
        for (double p : r.params)
            out << ',' << g17(p);
        out << ',' << g17(r.aoii) << ',' << g17(r.rate) << '\n';
    }
}

// Budget levels for the argmin table when the config does not pin one:
// fractions of the achievable rate span on this grid.
std::vector<double> default_budgets(const SweepResult &result) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const SweepRow &r : result.rows) {
        if (!r.error.empty() || !std::isfinite(r.rate))
            continue;
        lo = std::min(lo, r.rate);
        hi = std::max(hi, r.rate);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi))
        return {};
    std::vector<double> budgets;
    for (double f : {0.3, 0.5, 0.7, 0.9, 0.99})
        budgets.push_back(lo + f * (hi - lo));
    return budgets;
}

void run_sweep(const GeneratorMatrix &q, const ChannelModel &channel,
               const SweepSpec &spec, std::ostream &sweep_csv,
               std::ostream &argmin_csv) {
    const SweepResult result = sweep(q, spec, channel);
    write_sweep_csv(sweep_csv, result, spec.model, q.size());
    const std::vector<double> budgets =
        spec.budget ? std::vector<double>{*spec.budget}
                    : default_budgets(result);
    write_argmin_csv(argmin_csv, result, budgets, q.size());
}

void run_optimize(const GeneratorMatrix &q, const ChannelModel &channel,
                  const SweepSpec &spec, std::ostream &csv,
                  std::ostream &chat) {
    const SweepRow best = optimize_under_budget(q, spec, channel);
    SweepResult single;
    single.rows.push_back(best);
    single.argmin = 0;
    write_sweep_csv(csv, single, spec.model, q.size());
    chat << "argmin:";
    for (double p : best.params)
        chat << ' ' << g17(p);
    chat << " aoii=" << g17(best.aoii) << " rate=" << g17(best.rate) << '\n';
}

// ------------------------------------------------------------- dispatch --

void execute(json cfg, const std::string &action, const fs::path &out_dir,
             const std::string &stem, std::ostream &chat) {
    const GeneratorMatrix q = resolve_source(cfg);
    const ChannelModel channel = resolve_channel(cfg);
    const ModelCfg model = resolve_model(cfg);

    if (action == "analyze") {
        std::ofstream csv = open_out(out_dir, stem + ".csv");
        run_analyze(q, channel, model, csv);
        note_artifact(chat, out_dir, stem + ".csv");
    } else if (action == "simulate") {
        const SimConfig sim = resolve_sim(cfg);
        std::ofstream csv = open_out(out_dir, stem + ".csv");
        run_simulate(q, channel, model, sim, cfg, out_dir, csv, chat);
        note_artifact(chat, out_dir, stem + ".csv");
    } else if (action == "sweep") {
        const SweepSpec spec = resolve_sweep(cfg, model, q.size());
        std::ofstream sweep_csv = open_out(out_dir, stem + ".csv");
        std::ofstream argmin_csv = open_out(out_dir, stem + "_argmin.csv");
        run_sweep(q, channel, spec, sweep_csv, argmin_csv);
        note_artifact(chat, out_dir, stem + ".csv");
        note_artifact(chat, out_dir, stem + "_argmin.csv");
    } else if (action == "optimize") {
        const SweepSpec spec = resolve_sweep(cfg, model, q.size());
        std::ofstream csv = open_out(out_dir, stem + ".csv");
        run_optimize(q, channel, spec, csv, chat);
        note_artifact(chat, out_dir, stem + ".csv");
    } else {
        throw ConfigError("unknown action '" + action + "'");
    }
    write_resolved(std::move(cfg), action, out_dir, stem + "_config.json",
                   chat);
}

// ------------------------------------------------------------ reproduce --

json grid(double lo, double hi, int count) {
    return json{{"lo", lo}, {"hi", hi}, {"count", count}, {"log", true}};
}

struct Job {
    std::string stem;
    std::string action;
    json cfg;
};

std::vector<Job> preset_jobs(const std::string &figure) {
    std::vector<Job> jobs;
    const std::vector<std::string> sources = {"q1", "q2", "q3"};
    if (figure == "fig4" || figure == "fig6") {
        const bool push = figure == "fig4";
        for (const std::string &src : sources) {
            json cfg{{"source", src}, {"channel", {{"mu", 1.0}}}};
            if (push)
                cfg["model"]["push"] = {{"k", json::array({1, 2, 3})},
                                        {"theta", grid(0.1, 10, 20)}};
            else
                cfg["model"]["pull"] = {{"lambda", grid(0.1, 10, 20)}};
            cfg["sim"] = {{"cycles", 100000}, {"seed", 1}};
            jobs.push_back({figure + "_" + src + "_analytical", "analyze", cfg});
            jobs.push_back({figure + "_" + src + "_simulated", "simulate", cfg});
        }
        return jobs;
    }
    if (figure == "fig5" || figure == "fig7") {
        json cfg{{"source", "q3"}, {"channel", {{"mu", 1.0}}}};
        if (figure == "fig5")
            cfg["model"]["push"] = {{"k", 3}};
        else
            cfg["model"]["pull"] = json::object();
        cfg["sweep"] = {{"axes", grid(0.05, 20, 50)}};
        jobs.push_back({figure, "sweep", cfg});
        return jobs;
    }
    throw UnknownFigure("unknown figure '" + figure +
                        "' (expected fig4|fig5|fig6|fig7)");
}

void run_reproduce(const Options &opt, std::ostream &chat) {
    std::vector<Job> jobs = preset_jobs(opt.figure);
    for (Job &job : jobs) {
        if (opt.seed)
            job.cfg["sim"]["seed"] = *opt.seed;
        apply_overrides(job.cfg, opt.sets);
        execute(std::move(job.cfg), job.action, opt.out_dir, job.stem, chat);
    }
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
    CLI::App app{"Age-of-incorrect-information analysis for finite-state "
                 "Markov sources under push- and pull-based sampling"};
    app.require_subcommand(1);

    Options opt;
    std::string seed_text;
    auto add_common = [&](CLI::App *sub, bool with_config) {
        if (with_config)
            sub->add_option("--config", opt.config_path,
                            "experiment config (JSON)");
        sub->add_option("--set", opt.sets,
                        "config override, key=value with dotted keys");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", seed_text, "simulation seed override");
        sub->add_option("--format", opt.format, "output format (csv)");
    };

    CLI::App *analyze = app.add_subcommand("analyze", "analytical metrics");
    CLI::App *simulate = app.add_subcommand("simulate", "event simulation");
    CLI::App *sweep = app.add_subcommand("sweep", "policy grid evaluation");
    CLI::App *optimize =
        app.add_subcommand("optimize", "best policy under a rate budget");
    CLI::App *reproduce =
        app.add_subcommand("reproduce", "canned experiment presets");
    for (CLI::App *sub : {analyze, simulate, sweep, optimize})
        add_common(sub, true);
    add_common(reproduce, false);
    reproduce->add_option("figure", opt.figure, "fig4|fig5|fig6|fig7")
        ->required();

    std::vector<const char *> argv = {"aoii"};
    for (const std::string &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: usage: " << one_line(e.what()) << '\n';
        return 1;
    }

    try {
        if (!seed_text.empty()) {
            std::size_t used = 0;
            const std::uint64_t parsed = std::stoull(seed_text, &used);
            if (used != seed_text.size())
                throw ConfigError("--seed must be an unsigned integer");
            opt.seed = parsed;
        }
        if (opt.format != "csv")
            throw ConfigError("unsupported --format '" + opt.format + "'");

        if (app.got_subcommand(reproduce)) {
            run_reproduce(opt, out);
        } else {
            const std::string action = app.got_subcommand(analyze) ? "analyze"
                                       : app.got_subcommand(simulate)
                                           ? "simulate"
                                       : app.got_subcommand(sweep) ? "sweep"
                                                                   : "optimize";
            execute(load_config(opt), action, opt.out_dir, action, out);
        }
        return 0;
    } catch (const ValidationError &e) {
        err << "error: validation: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const ConfigError &e) {
        err << "error: config: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const UnknownFigure &e) {
        err << "error: unknown-figure: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const ReducibleChain &e) {
        err << "error: reducible-chain: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const NoFeasiblePolicy &e) {
        err << "error: no-feasible-policy: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const SingularTransientBlock &e) {
        err << "error: singular-block: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const std::invalid_argument &e) {
        err << "error: config: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const json::exception &e) {
        err << "error: config: " << one_line(e.what()) << '\n';
        return 1;
    } catch (const std::exception &e) {
        err << "error: internal: " << one_line(e.what()) << '\n';
        return 1;
    }
}

int run(const std::vector<std::string> &args) {
    return run(args, std::cout, std::cerr);
}

} // namespace aoii::cli
