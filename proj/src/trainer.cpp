#include "aqil/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "aqil/errors.hpp"
#include "aqil/reward.hpp"

namespace aqil {

Trainer::Trainer(TrainConfig config)
    : config_((config.validate(), std::move(config))),
      rng_(config_.seed),
      net_(QNetwork<double>::random(config_.hidden_sizes, rng_)),
      target_(sync_target(net_)),
      buffer_(config_.replay_capacity),
      env_(config_.physics),
      expert_(config_.pid, config_.physics.tau) {
    if (config_.optimizer == OptimizerKind::Adam) adam_.emplace(config_.learning_rate);
    counters_.min_buffer_at_gradient_step = std::numeric_limits<std::size_t>::max();
}

void Trainer::set_network(QNetwork<double> net) {
    net_ = std::move(net);
    target_ = sync_target(net_);
    if (adam_) adam_.emplace(config_.learning_rate);
}

EpisodeLog Trainer::run_imitation_episode(double epsilon) { return run_episode(Mode::Imitation, epsilon); }

EpisodeLog Trainer::run_reinforcement_episode(double epsilon) {
    return run_episode(Mode::Reinforcement, epsilon);
}

EpisodeLog Trainer::run_episode(Mode mode, double epsilon) {
    const auto started = std::chrono::steady_clock::now();
    const bool imitation = mode == Mode::Imitation;

    CartState state = env_.reset(rng_);
    if (imitation) expert_.reset();

    EpisodeLog log;
    log.episode = ++episodes_run_;
    log.phase = mode;
    log.epsilon = epsilon;
    double loss_sum = 0.0;
    long long loss_count = 0;

    while (true) {
        const Action proposed = select_action(net_, state, epsilon, rng_);
        const double theta_deg = state.theta_degrees();

        StepRecord rec{mode, state, proposed, proposed, std::nullopt, 0.0, {}, false};
        Action stored_action = proposed;
        if (imitation) {
            const Action a_pid = expert_.act(state);
            rec.expert = a_pid;
            rec.reward = imitation_reward(theta_deg, a_pid, proposed, config_.reward);
            rec.executed = config_.imitation_rollout == ImitationRollout::Expert ? a_pid : proposed;
            stored_action = config_.imitation_stored_action == ImitationStoredAction::Executed ? rec.executed
                                                                                               : proposed;
            ++counters_.imitation_steps;
            ++counters_.imitation_rewards;
            if (rec.executed == a_pid) ++counters_.imitation_steps_expert_executed;
        } else {
            rec.reward = rl_reward(theta_deg, config_.reward);
            ++counters_.reinforcement_steps;
            ++counters_.rl_rewards;
        }

        const StepOutcome outcome = env_.step(rec.executed);
        // A step-cap ending is a time limit, not a failure, so it still bootstraps.
        rec.stored = {state, stored_action, rec.reward, outcome.next_state, outcome.failed};
        rec.episode_over = outcome.terminal;
        buffer_.push(rec.stored);
        log.score += rec.reward;
        ++log.steps;

        ++env_steps_;
        if (env_steps_ % config_.train_interval == 0 && buffer_.size() >= config_.batch_size) {
            loss_sum += learn();
            ++loss_count;
        }
        if (observer_) observer_(rec);

        state = outcome.next_state;
        if (outcome.terminal) break;
    }

    if (config_.target_sync_steps == 0) {
        target_ = sync_target(net_);
        ++counters_.target_syncs;
    }
    log.mean_loss = loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0;
    log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return log;
}

double Trainer::learn() {
    counters_.min_buffer_at_gradient_step = std::min(counters_.min_buffer_at_gradient_step, buffer_.size());
    const auto batch = buffer_.sample(config_.batch_size, rng_);
    const auto n = static_cast<Eigen::Index>(batch.size());

    Eigen::MatrixXd next(4, n);
    for (Eigen::Index j = 0; j < n; ++j) next.col(j) = batch[static_cast<std::size_t>(j)].next_state.vector();
    const Eigen::MatrixXd q_next = target_.forward_batch(next);

    std::vector<BellmanSample> samples;
    samples.reserve(batch.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& t = batch[static_cast<std::size_t>(j)];
        const double y = t.terminal ? t.reward : t.reward + config_.gamma * q_next.col(j).maxCoeff();
        samples.push_back({t.state, t.action, y});
    }

    auto [loss, grads] = loss_and_gradients(net_, std::span<const BellmanSample>(samples));
    if (!std::isfinite(loss)) throw NumericalError("training loss became non-finite");
    if (config_.grad_clip > 0.0) clip_gradient_norm(grads, config_.grad_clip);
    if (adam_) adam_->step(net_, grads);
    else sgd_step(net_, grads, config_.learning_rate);
    if (!net_.all_finite()) throw NumericalError("network parameters became non-finite");

    ++counters_.gradient_steps;
    if (config_.target_sync_steps > 0 && counters_.gradient_steps % config_.target_sync_steps == 0) {
        target_ = sync_target(net_);
        ++counters_.target_syncs;
    }
    return loss;
}

TrainResult Trainer::train(const std::vector<Phase>& phases) {
    validate_phases(phases);
    TrainResult result;
    double epsilon = config_.epsilon_start;
    for (std::size_t p = 0; p < phases.size(); ++p) {
        if (p > 0 && config_.restart_epsilon) epsilon = config_.epsilon_start;
        result.phase_starts.push_back(result.logs.size());
        for (int epoch = 0; epoch < phases[p].episodes; ++epoch) {
            for (int k = 0; k < config_.trajectories_per_epoch; ++k) {
                result.logs.push_back(run_episode(phases[p].mode, epsilon));
                epsilon = std::max(config_.epsilon_min, epsilon * config_.epsilon_decay);
            }
        }
    }
    result.network = net_;
    result.counters = counters_;
    return result;
}

TrainResult train(const TrainConfig& config, const std::vector<Phase>& phases) {
    validate_phases(phases);
    Trainer trainer(config);
    return trainer.train(phases);
}

}  // namespace aqil
