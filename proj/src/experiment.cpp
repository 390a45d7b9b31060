#include "aqil/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "aqil/csv.hpp"
#include "aqil/errors.hpp"
#include "aqil/reward.hpp"
#include "aqil/svg.hpp"
#include "aqil/weights_io.hpp"

namespace aqil {

// ---------------------------------------------------------------------------
// Specs and config files

const std::vector<std::string>& named_experiments() {
    static const std::vector<std::string> names{"RL500", "IL250", "IL500", "IL250+RL250"};
    return names;
}

std::vector<Phase> named_phases(std::string_view name) {
    if (name == "RL500") return {{Mode::Reinforcement, 500}};
    if (name == "IL250") return {{Mode::Imitation, 250}};
    if (name == "IL500") return {{Mode::Imitation, 500}};
    if (name == "IL250+RL250") return {{Mode::Imitation, 250}, {Mode::Reinforcement, 250}};
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentSpec named_spec(std::string_view name) {
    ExperimentSpec spec;
    spec.name = std::string(name);
    spec.phases = named_phases(name);
    return spec;
}

std::vector<Phase> parse_phases(std::string_view text) {
    std::vector<Phase> phases;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw ConfigError("phase must look like mode:episodes, got '" + item + "'");
        long long n = 0;
        try {
            n = parse_int(parts[1]);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        phases.push_back({parse_mode(parts[0]), static_cast<int>(n)});
    }
    validate_phases(phases);
    return phases;
}

namespace {

bool is_named(std::string_view name) {
    const auto& names = named_experiments();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& f : split(text, ',')) {
        const long long v = parse_int(f);
        if (v < 0) throw ConfigError("seeds must be non-negative");
        seeds.push_back(static_cast<std::uint64_t>(v));
    }
    if (seeds.empty()) throw ConfigError("seed list is empty");
    return seeds;
}

// Experiment-level keys; everything else goes to TrainConfig.
bool apply_spec_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
    key = trim(key);
    try {
        if (key == "phases") spec.phases = parse_phases(value);
        else if (key == "seeds") spec.seeds = parse_seeds(value);
        else if (key == "out") spec.output_dir = std::string(trim(value));
        else if (key == "eval_episodes") spec.eval.episodes = static_cast<int>(parse_int(value));
        else if (key == "eval_seed") spec.eval.seed = static_cast<std::uint64_t>(parse_int(value));
        else if (key == "eval_max_steps") spec.eval.max_steps = static_cast<int>(parse_int(value));
        else if (key == "svg") spec.svg = trim(value) == "true" || trim(value) == "1";
        else return apply_setting(spec.config, key, value);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
    return true;
}

}  // namespace

std::vector<ExperimentSpec> parse_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> defaults;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string_view body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
            const auto name = trim(body.substr(1, body.size() - 2));
            if (name.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            sections.push_back({std::string(name), {}});
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        auto entry = std::make_pair(std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1))));
        if (sections.empty()) defaults.push_back(std::move(entry));
        else sections.back().second.push_back(std::move(entry));
    }
    if (sections.empty()) throw ConfigError("config defines no [experiment] section");

    std::vector<ExperimentSpec> specs;
    std::set<std::string> seen;
    for (const auto& [name, settings] : sections) {
        if (!seen.insert(name).second) throw ConfigError("duplicate section [" + name + "]");
        ExperimentSpec spec;
        spec.name = name;
        if (is_named(name)) spec.phases = named_phases(name);
        for (const auto& list : {defaults, settings})
            for (const auto& [key, value] : list)
                if (!apply_spec_setting(spec, key, value))
                    throw ConfigError("[" + name + "]: unknown key '" + key + "'");
        if (spec.phases.empty()) throw ConfigError("[" + name + "]: no phases given");
        if (spec.eval.episodes < 1 || spec.eval.max_steps < 1)
            throw ConfigError("[" + name + "]: eval_episodes and eval_max_steps must be >= 1");
        spec.config.validate();
        specs.push_back(std::move(spec));
    }
    return specs;
}

std::vector<ExperimentSpec> load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    return parse_config(in);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

template <typename Policy>
EvaluationResult rollouts(Policy&& policy, const EvalSettings& settings, const PhysicsParams& physics,
                          const RewardParams& reward) {
    if (settings.episodes < 1) throw ConfigError("evaluation needs at least one episode");
    PhysicsParams p = physics;
    p.max_episode_steps = settings.max_steps;
    CartPole env(p);
    Rng rng(settings.seed);

    EvaluationResult result;
    for (int e = 0; e < settings.episodes; ++e) {
        CartState state = env.reset(rng);
        policy.reset();
        double score = 0.0;
        while (true) {
            score += rl_reward(state.theta_degrees(), reward);
            const StepOutcome out = env.step(policy.act(state));
            state = out.next_state;
            if (out.terminal) break;
        }
        result.scores.push_back(score);
        result.steps.push_back(env.steps_elapsed());
    }
    result.mean_score =
        std::accumulate(result.scores.begin(), result.scores.end(), 0.0) / static_cast<double>(result.scores.size());
    result.best_score = *std::max_element(result.scores.begin(), result.scores.end());
    return result;
}

struct GreedyPolicy {
    const QNetwork<double>& net;
    void reset() {}
    Action act(const CartState& s) const {
        const auto q = q_values(net, s);
        return q(1) > q(0) ? Action::PushRight : Action::PushLeft;
    }
};

}  // namespace

EvaluationResult evaluate_policy(const QNetwork<double>& net, const EvalSettings& settings,
                                 const PhysicsParams& physics, const RewardParams& reward) {
    return rollouts(GreedyPolicy{net}, settings, physics, reward);
}

EvaluationResult evaluate_expert(const EvalSettings& settings, const PhysicsParams& physics,
                                 const RewardParams& reward, const PidGains& gains) {
    return rollouts(PidExpert(gains, physics.tau), settings, physics, reward);
}

// ---------------------------------------------------------------------------
// Summaries

SeedSummary summarize_seed(std::uint64_t seed, const std::vector<EpisodeLog>& logs) {
    if (logs.empty()) throw std::invalid_argument("summary of an empty run");
    SeedSummary s;
    s.seed = seed;
    double total = 0.0;
    s.best_score = logs.front().score;
    for (const auto& log : logs) {
        total += log.score;
        s.best_score = std::max(s.best_score, log.score);
    }
    s.mean_score = total / static_cast<double>(logs.size());
    const std::size_t tail = std::min<std::size_t>(50, logs.size());
    double tail_total = 0.0;
    for (std::size_t i = logs.size() - tail; i < logs.size(); ++i) tail_total += logs[i].score;
    s.last50_mean = tail_total / static_cast<double>(tail);
    return s;
}

SummaryRow aggregate(std::string name, std::vector<SeedSummary> per_seed) {
    if (per_seed.empty()) throw std::invalid_argument("aggregate over no seeds");
    SummaryRow row;
    row.name = std::move(name);
    row.best_score = per_seed.front().best_score;
    for (const auto& s : per_seed) {
        row.mean_score += s.mean_score;
        row.last50_mean += s.last50_mean;
        row.best_score = std::max(row.best_score, s.best_score);
    }
    row.mean_score /= static_cast<double>(per_seed.size());
    row.last50_mean /= static_cast<double>(per_seed.size());
    row.per_seed = std::move(per_seed);
    return row;
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("summary table needs at least one row");
    std::size_t width = 10;
    for (const auto& r : rows) width = std::max(width, r.name.size() + 5);
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-*s %14s %14s %14s %6s\n", static_cast<int>(width), "experiment", "mean",
                  "best", "last50 mean", "seeds");
    out << buf << std::string(width + 52, '-') << '\n';
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-*s %14.2f %14.2f %14.2f %6zu\n", static_cast<int>(width), r.name.c_str(),
                      r.mean_score, r.best_score, r.last50_mean, r.per_seed.size());
        out << buf;
    }
    out << '\n';
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%-*s %14.2f\n", static_cast<int>(width), (r.name + " Best").c_str(),
                      r.best_score);
        out << buf;
    }
    return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "experiment,seed,mean_score,best_score,last50_mean\n";
    for (const auto& r : rows) {
        out << r.name << ",all," << format_double(r.mean_score) << ',' << format_double(r.best_score) << ','
            << format_double(r.last50_mean) << '\n';
        for (const auto& s : r.per_seed)
            out << r.name << ',' << s.seed << ',' << format_double(s.mean_score) << ','
                << format_double(s.best_score) << ',' << format_double(s.last50_mean) << '\n';
    }
    return out.str();
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || trim(line) != "experiment,seed,mean_score,best_score,last50_mean")
        throw std::invalid_argument("summary csv: bad header");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 5) throw std::invalid_argument("summary csv: malformed line '" + line + "'");
        if (f[1] == "all") {
            rows.push_back({f[0], parse_double(f[2]), parse_double(f[3]), parse_double(f[4]), {}});
        } else {
            if (rows.empty() || rows.back().name != f[0])
                throw std::invalid_argument("summary csv: seed row without aggregate row");
            rows.back().per_seed.push_back({static_cast<std::uint64_t>(parse_int(f[1])), parse_double(f[2]),
                                            parse_double(f[3]), parse_double(f[4])});
        }
    }
    return rows;
}

void write_episode_csv(std::ostream& out, const std::vector<EpisodeLog>& logs) {
    out << "episode,phase,steps,score,mean_loss,epsilon\n";
    for (const auto& l : logs)
        out << l.episode << ',' << to_string(l.phase) << ',' << l.steps << ',' << format_double(l.score) << ','
            << format_double(l.mean_loss) << ',' << format_double(l.epsilon) << '\n';
}

std::vector<EpisodeLog> read_episode_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "episode,phase,steps,score,mean_loss,epsilon")
        throw std::invalid_argument("episode csv: bad header");
    std::vector<EpisodeLog> logs;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 6) throw std::invalid_argument("episode csv: malformed line '" + line + "'");
        EpisodeLog l;
        l.episode = static_cast<int>(parse_int(f[0]));
        l.phase = parse_mode(f[1]);
        l.steps = static_cast<int>(parse_int(f[2]));
        l.score = parse_double(f[3]);
        l.mean_loss = parse_double(f[4]);
        l.epsilon = parse_double(f[5]);
        logs.push_back(l);
    }
    return logs;
}

// ---------------------------------------------------------------------------
// Running

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.name.empty()) throw ConfigError("experiment needs a name");
    validate_phases(spec.phases);
    if (spec.seeds.empty()) throw ConfigError("experiment needs at least one seed");

    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec || !std::filesystem::is_directory(spec.output_dir))
        throw ConfigError("cannot create output directory " + spec.output_dir.string());

    ExperimentResult result;
    std::vector<SeedSummary> summaries;
    for (const auto seed : spec.seeds) {
        TrainConfig config = spec.config;
        config.seed = seed;
        SeedRun run;
        run.seed = seed;
        run.training = train(config, spec.phases);

        const std::string stem = spec.name + "_seed" + std::to_string(seed);
        {
            std::ofstream csv(spec.output_dir / (stem + "_episodes.csv"));
            if (!csv) throw ConfigError("cannot write into " + spec.output_dir.string());
            write_episode_csv(csv, run.training.logs);
        }
        write_weights(spec.output_dir / (stem + "_weights.txt"), run.training.network);
        if (spec.svg) write_curves_svg(spec.output_dir / (stem + "_curves.svg"), run.training.logs, stem);

        run.evaluation = evaluate_policy(run.training.network, spec.eval, config.physics, config.reward);
        summaries.push_back(summarize_seed(seed, run.training.logs));
        result.runs.push_back(std::move(run));
    }
    {
        std::ofstream cfg(spec.output_dir / (spec.name + "_config.txt"));
        cfg << "[" << spec.name << "]\nphases = ";
        for (std::size_t i = 0; i < spec.phases.size(); ++i)
            cfg << (i ? ", " : "") << to_string(spec.phases[i].mode) << ':' << spec.phases[i].episodes;
        cfg << '\n';
        for (const auto& [key, value] : describe(spec.config))
            if (key != "seed") cfg << key << " = " << value << '\n';
    }
    result.summary = aggregate(spec.name, std::move(summaries));
    return result;
}

// ---------------------------------------------------------------------------
// Regret

RegretEntry compute_regret(std::string name, double value_policy, double value_expert, double value_optimal) {
    RegretEntry e;
    e.name = std::move(name);
    e.value_policy = value_policy;
    e.value_expert = value_expert;
    e.value_optimal = value_optimal;
    e.imitation_regret = value_expert - value_policy;
    e.expert_regret = value_optimal - value_expert;
    e.reinforcement_regret = e.imitation_regret + e.expert_regret;
    e.goal_met = e.reinforcement_regret <= e.expert_regret;
    return e;
}

std::vector<RegretEntry> regret_from_values(const std::map<std::string, double>& policy_values,
                                            double expert_value) {
    double optimal = expert_value;
    for (const auto& [name, v] : policy_values) optimal = std::max(optimal, v);
    std::vector<RegretEntry> out;
    for (const auto& [name, v] : policy_values) out.push_back(compute_regret(name, v, expert_value, optimal));
    return out;
}

std::vector<RegretEntry> regret_report(const std::map<std::string, QNetwork<double>>& nets,
                                       const EvalSettings& settings, const TrainConfig& config) {
    std::map<std::string, double> values;
    for (const auto& [name, net] : nets)
        values[name] = evaluate_policy(net, settings, config.physics, config.reward).mean_score;
    const double expert = evaluate_expert(settings, config.physics, config.reward, config.pid).mean_score;
    return regret_from_values(values, expert);
}

std::string format_regret_report(const std::vector<RegretEntry>& entries) {
    std::ostringstream out;
    if (entries.empty()) return "no policies evaluated\n";
    char buf[512];
    out << "V(expert)  = " << format_double(entries.front().value_expert) << '\n'
        << "V(optimal) = " << format_double(entries.front().value_optimal)
        << "  (proxy: best mean evaluation score observed)\n\n";
    std::snprintf(buf, sizeof buf, "%-24s %12s %12s %14s %12s %5s\n", "policy", "V(policy)", "imitation",
                  "reinforcement", "expert", "goal");
    out << buf;
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof buf, "%-24s %12.2f %12.2f %14.2f %12.2f %5s\n", e.name.c_str(), e.value_policy,
                      e.imitation_regret, e.reinforcement_regret, e.expert_regret, e.goal_met ? "yes" : "no");
        out << buf;
    }
    return out.str();
}

RunReport report_runs(const std::filesystem::path& dir, const EvalSettings& settings, const TrainConfig& config) {
    if (!std::filesystem::is_directory(dir)) throw ConfigError("not a run directory: " + dir.string());
    static const std::regex episodes_re(R"((.+)_seed(\d+)_episodes\.csv)");
    static const std::regex weights_re(R"((.+)_seed(\d+)_weights\.txt)");

    std::map<std::string, std::vector<SeedSummary>> by_name;
    std::map<std::string, std::vector<std::pair<std::uint64_t, std::filesystem::path>>> weights;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        const std::string file = path.filename().string();
        std::smatch m;
        if (std::regex_match(file, m, episodes_re)) {
            std::ifstream in(path);
            by_name[m[1]].push_back(summarize_seed(std::stoull(m[2]), read_episode_csv(in)));
        } else if (std::regex_match(file, m, weights_re)) {
            weights[m[1]].emplace_back(std::stoull(m[2]), path);
        }
    }
    if (by_name.empty() && weights.empty()) throw ConfigError("no run files found in " + dir.string());

    RunReport report;
    for (auto& [name, seeds] : by_name) {
        std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.seed < b.seed; });
        report.summaries.push_back(aggregate(name, std::move(seeds)));
    }

    std::map<std::string, double> values;
    for (auto& [name, runs] : weights) {
        std::sort(runs.begin(), runs.end());
        double total = 0.0;
        for (const auto& [seed, path] : runs) {
            const double v = evaluate_policy(read_weights(path), settings, config.physics, config.reward).mean_score;
            values[name + "_seed" + std::to_string(seed)] = v;
            total += v;
        }
        values[name] = total / static_cast<double>(runs.size());
    }
    const double expert = evaluate_expert(settings, config.physics, config.reward, config.pid).mean_score;
    report.regrets = regret_from_values(values, expert);

    if (!report.summaries.empty()) {
        std::ofstream(dir / "summary.csv") << summary_csv(report.summaries);
    }
    std::ofstream(dir / "regret_report.txt") << format_regret_report(report.regrets);
    return report;
}

}  // namespace aqil
