// aqil: train, evaluate and report Q-imitation / Q-learning experiments on cart-pole.
//
//   aqil run <experiment-name|config-path> [--seeds 1,2,3] [--out DIR] [--svg]
//   aqil evaluate --weights FILE [--episodes M] [--seed S] [--max-steps T]
//   aqil report --runs DIR [--episodes M] [--seed S] [--max-steps T]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime or numerical error.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aqil/csv.hpp"
#include "aqil/errors.hpp"
#include "aqil/experiment.hpp"
#include "aqil/weights_io.hpp"

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    for (const auto& f : aqil::split(text, ',')) {
        const long long v = aqil::parse_int(f);
        if (v < 0) throw aqil::ConfigError("seeds must be non-negative");
        seeds.push_back(static_cast<std::uint64_t>(v));
    }
    return seeds;
}

int run(const std::string& target, const std::string& seeds, const std::string& out, bool svg) {
    std::vector<aqil::ExperimentSpec> specs;
    if (std::filesystem::is_regular_file(target)) specs = aqil::load_config(target);
    else if (target.ends_with(".ini") || target.find('/') != std::string::npos)
        throw aqil::ConfigError("no such config file: " + target);
    else specs.push_back(aqil::named_spec(target));

    std::vector<aqil::SummaryRow> rows;
    for (auto& spec : specs) {
        if (!seeds.empty()) spec.seeds = parse_seed_list(seeds);
        if (!out.empty()) spec.output_dir = out;
        spec.svg = spec.svg || svg;
        std::cerr << "running " << spec.name << " over " << spec.seeds.size() << " seed(s)\n";
        const auto result = aqil::run_experiment(spec);
        for (const auto& r : result.runs)
            std::cerr << "  seed " << r.seed << ": eval mean " << r.evaluation.mean_score << ", best "
                      << r.evaluation.best_score << '\n';
        rows.push_back(result.summary);
    }
    std::cout << aqil::format_summary_table(rows);
    return 0;
}

int evaluate(const std::string& weights, const aqil::EvalSettings& settings) {
    const auto net = aqil::read_weights(std::filesystem::path(weights));
    const auto result = aqil::evaluate_policy(net, settings);
    std::cout << "episodes " << result.scores.size() << "\nmean " << aqil::format_double(result.mean_score)
              << "\nbest " << aqil::format_double(result.best_score) << "\nscores";
    for (double s : result.scores) std::cout << ' ' << aqil::format_double(s);
    std::cout << '\n';
    return 0;
}

int report(const std::string& dir, const aqil::EvalSettings& settings) {
    const auto rep = aqil::report_runs(dir, settings);
    if (!rep.summaries.empty()) std::cout << aqil::format_summary_table(rep.summaries) << '\n';
    std::cout << aqil::format_regret_report(rep.regrets);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Augmented Q-imitation learning on cart-pole"};
    app.require_subcommand(1);

    std::string target, seeds, out;
    bool svg = false;
    auto* run_cmd = app.add_subcommand("run", "Train a named experiment or every experiment in a config file");
    run_cmd->add_option("target", target, "RL500 | IL250 | IL500 | IL250+RL250 | path to config")->required();
    run_cmd->add_option("--seeds", seeds, "Comma-separated seed list");
    run_cmd->add_option("--out", out, "Output directory");
    run_cmd->add_flag("--svg", svg, "Also write loss/reward curve plots");

    aqil::EvalSettings eval;
    std::string weights;
    auto* eval_cmd = app.add_subcommand("evaluate", "Greedy evaluation of exported weights");
    eval_cmd->add_option("--weights", weights, "Weight export file")->required();
    eval_cmd->add_option("--episodes", eval.episodes, "Evaluation episodes")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", eval.seed, "Evaluation seed");
    eval_cmd->add_option("--max-steps", eval.max_steps, "Step cap per episode")->check(CLI::PositiveNumber);

    std::string runs;
    auto* report_cmd = app.add_subcommand("report", "Summary table and regret report for a run directory");
    report_cmd->add_option("--runs", runs, "Run directory")->required();
    report_cmd->add_option("--episodes", eval.episodes, "Evaluation episodes")->check(CLI::PositiveNumber);
    report_cmd->add_option("--seed", eval.seed, "Evaluation seed");
    report_cmd->add_option("--max-steps", eval.max_steps, "Step cap per episode")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd) return run(target, seeds, out, svg);
        if (*eval_cmd) return evaluate(weights, eval);
        return report(runs, eval);
    } catch (const aqil::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
