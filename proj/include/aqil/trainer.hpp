#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "aqil/config.hpp"
#include "aqil/env.hpp"
#include "aqil/expert.hpp"
#include "aqil/optimizer.hpp"
#include "aqil/qnet.hpp"
#include "aqil/random.hpp"
#include "aqil/replay_buffer.hpp"

namespace aqil {

/// Epsilon-greedy over Q(s, .). Always consumes one draw for the coin and, when
/// exploring, one for the action; greedy ties go to PushLeft.
template <FullRangeGenerator G>
Action select_action(const QNetwork<double>& net, const CartState& state, double epsilon, G& gen) {
    if (uniform01(gen) < epsilon) return action_from_index(static_cast<int>(uniform_index(gen, 2)));
    const auto q = q_values(net, state);
    return q(1) > q(0) ? Action::PushRight : Action::PushLeft;
}

struct EpisodeLog {
    int episode = 0;  // 1-based across all phases
    Mode phase = Mode::Reinforcement;
    int steps = 0;
    double score = 0.0;      // total reward collected
    double mean_loss = 0.0;  // 0 when no gradient step happened
    double epsilon = 0.0;
    double wall_seconds = 0.0;
};

/// Instrumentation for the training-loop invariants.
struct TrainCounters {
    long long imitation_steps = 0;
    long long reinforcement_steps = 0;
    long long imitation_steps_expert_executed = 0;
    long long imitation_rewards = 0;
    long long rl_rewards = 0;
    long long gradient_steps = 0;
    long long target_syncs = 0;
    std::size_t min_buffer_at_gradient_step = 0;
};

/// Everything that happened on one environment step.
struct StepRecord {
    Mode mode;
    CartState state;
    Action executed;
    Action proposed;
    std::optional<Action> expert;
    double reward;
    Transition stored;
    bool episode_over;
};

struct TrainResult {
    QNetwork<double> network;
    std::vector<EpisodeLog> logs;
    std::vector<std::size_t> phase_starts;  // index into logs where each phase begins
    TrainCounters counters;
};

/// Owns one persistent network, target, replay buffer, environment and random stream.
/// Phases run back to back on the same state, so an imitation phase followed by a
/// reinforcement phase hands over the trained network unchanged.
class Trainer {
public:
    explicit Trainer(TrainConfig config);

    /// Imitation episode: reward = imitation_reward(theta, a_pid, a_model).
    EpisodeLog run_imitation_episode(double epsilon);
    /// Reinforcement episode: agent acts, reward = rl_reward(theta).
    EpisodeLog run_reinforcement_episode(double epsilon);

    TrainResult train(const std::vector<Phase>& phases);

    void set_step_observer(std::function<void(const StepRecord&)> observer) { observer_ = std::move(observer); }
    /// Replaces the online network and re-syncs the target.
    void set_network(QNetwork<double> net);

    const QNetwork<double>& network() const { return net_; }
    const TargetNetwork<double>& target() const { return target_; }
    const ReplayBuffer& buffer() const { return buffer_; }
    const TrainCounters& counters() const { return counters_; }
    const TrainConfig& config() const { return config_; }

private:
    EpisodeLog run_episode(Mode mode, double epsilon);
    double learn();

    TrainConfig config_;
    Rng rng_;
    QNetwork<double> net_;
    TargetNetwork<double> target_;
    ReplayBuffer buffer_;
    CartPole env_;
    PidExpert expert_;
    std::optional<Adam<double>> adam_;
    TrainCounters counters_;
    std::function<void(const StepRecord&)> observer_;
    long long env_steps_ = 0;
    int episodes_run_ = 0;
};

/// Convenience wrapper: fresh Trainer, then train.
TrainResult train(const TrainConfig& config, const std::vector<Phase>& phases);

}  // namespace aqil
