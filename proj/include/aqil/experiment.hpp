#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aqil/config.hpp"
#include "aqil/qnet.hpp"
#include "aqil/trainer.hpp"

namespace aqil {

/// Greedy evaluation rollouts, scored with the reinforcement reward.
struct EvalSettings {
    int episodes = 20;
    std::uint64_t seed = 1000;
    int max_steps = 50000;
};

struct ExperimentSpec {
    std::string name;
    std::vector<Phase> phases;
    TrainConfig config;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::filesystem::path output_dir = "runs";
    EvalSettings eval;
    bool svg = false;
};

/// RL500, IL250, IL500 and IL250+RL250.
const std::vector<std::string>& named_experiments();
/// Phase budgets of a named experiment. Throws ConfigError for unknown names.
std::vector<Phase> named_phases(std::string_view name);
ExperimentSpec named_spec(std::string_view name);

/// "imitation:250, reinforcement:250" (IL/RL accepted as mode aliases).
std::vector<Phase> parse_phases(std::string_view text);

/// Flat `key = value` lines. Keys before the first `[section]` are defaults shared by
/// every section; each section defines one experiment named after it. Besides every
/// TrainConfig key: phases, seeds, out, eval_episodes, eval_seed, eval_max_steps, svg.
/// A section named after a built-in experiment inherits its phases.
std::vector<ExperimentSpec> parse_config(std::istream& in);
std::vector<ExperimentSpec> load_config(const std::filesystem::path& path);

struct EvaluationResult {
    double mean_score = 0.0;
    double best_score = 0.0;
    std::vector<double> scores;
    std::vector<int> steps;
};

/// Greedy (epsilon = 0) rollouts of the network. Never modifies it.
EvaluationResult evaluate_policy(const QNetwork<double>& net, const EvalSettings& settings,
                                 const PhysicsParams& physics = {}, const RewardParams& reward = {});
/// The same rollouts driven by the PID expert.
EvaluationResult evaluate_expert(const EvalSettings& settings, const PhysicsParams& physics = {},
                                 const RewardParams& reward = {}, const PidGains& gains = {});

struct SeedSummary {
    std::uint64_t seed = 0;
    double mean_score = 0.0;
    double best_score = 0.0;
    double last50_mean = 0.0;

    friend bool operator==(const SeedSummary&, const SeedSummary&) = default;
};

/// Training-curve summary in the layout of a mean/best comparison table.
struct SummaryRow {
    std::string name;
    double mean_score = 0.0;   // mean of per-seed means
    double best_score = 0.0;   // best single episode over all seeds
    double last50_mean = 0.0;  // mean of per-seed trailing-50-episode means
    std::vector<SeedSummary> per_seed;

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

SeedSummary summarize_seed(std::uint64_t seed, const std::vector<EpisodeLog>& logs);
SummaryRow aggregate(std::string name, std::vector<SeedSummary> per_seed);

struct SeedRun {
    std::uint64_t seed = 0;
    TrainResult training;
    EvaluationResult evaluation;
};

struct ExperimentResult {
    SummaryRow summary;
    std::vector<SeedRun> runs;
};

/// Trains every seed, writes `<name>_seed<k>_episodes.csv` and `<name>_seed<k>_weights.txt`
/// (plus `_curves.svg` when requested) and evaluates each trained network.
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct RegretEntry {
    std::string name;
    double value_policy = 0.0;   // V(pi)
    double value_expert = 0.0;   // V(pi')
    double value_optimal = 0.0;  // V(pi''), proxied by the best mean observed
    double imitation_regret = 0.0;
    double reinforcement_regret = 0.0;
    double expert_regret = 0.0;
    bool goal_met = false;  // reinforcement regret <= expert regret
};

/// Regrets from value estimates. Reinforcement regret is stored as
/// imitation + expert regret so the telescoping identity is exact in floating point.
RegretEntry compute_regret(std::string name, double value_policy, double value_expert, double value_optimal);

/// V(pi'') is the maximum over the expert's value and every policy value given.
std::vector<RegretEntry> regret_from_values(const std::map<std::string, double>& policy_values,
                                            double expert_value);

/// Evaluates every network and the PID expert under the same settings.
std::vector<RegretEntry> regret_report(const std::map<std::string, QNetwork<double>>& nets,
                                       const EvalSettings& settings, const TrainConfig& config = {});

std::string format_regret_report(const std::vector<RegretEntry>& entries);

std::string format_summary_table(const std::vector<SummaryRow>& rows);
/// Columns: experiment,seed,mean_score,best_score,last50_mean. The aggregate row has seed "all"
/// and precedes its per-seed rows.
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(std::string_view text);

/// Columns: episode,phase,steps,score,mean_loss,epsilon.
void write_episode_csv(std::ostream& out, const std::vector<EpisodeLog>& logs);
std::vector<EpisodeLog> read_episode_csv(std::istream& in);

/// Outcome of `report` over a run directory.
struct RunReport {
    std::vector<SummaryRow> summaries;
    std::vector<RegretEntry> regrets;
};

/// Summarizes every `<name>_seed<k>_episodes.csv` and evaluates every `<name>_seed<k>_weights.txt`
/// in `dir`. Per-experiment regret entries use the mean value over that experiment's seeds.
/// Writes summary.csv and regret_report.txt into `dir`.
RunReport report_runs(const std::filesystem::path& dir, const EvalSettings& settings,
                      const TrainConfig& config = {});

}  // namespace aqil
