#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aqil/env.hpp"
#include "aqil/expert.hpp"
#include "aqil/reward.hpp"

namespace aqil {

enum class Mode { Imitation, Reinforcement };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct Phase {
    Mode mode;
    int episodes;  // epochs; each runs `trajectories_per_epoch` episodes

    friend bool operator==(const Phase&, const Phase&) = default;
};

enum class OptimizerKind { Sgd, Adam };

/// Which action drives the environment during imitation.
enum class ImitationRollout {
    /// The expert acts; the agent's proposal only enters the reward.
    Expert,
    /// The agent's epsilon-greedy proposal acts.
    Agent,
};

/// Which action is stored in the replay transition during imitation.
/// Proposed gives the agent's own choice a target every step; with Executed the action the
/// expert never takes receives no gradient.
enum class ImitationStoredAction { Executed, Proposed };

struct TrainConfig {
    int trajectories_per_epoch = 1;
    double gamma = 0.95;
    double epsilon_start = 1.0;
    double epsilon_min = 0.01;
    double epsilon_decay = 0.97;
    bool restart_epsilon = false;  // true restarts at every phase boundary
    std::size_t batch_size = 64;
    std::size_t replay_capacity = 1000000;  // large enough that imitation data outlives the run
    double learning_rate = 3e-4;
    OptimizerKind optimizer = OptimizerKind::Adam;
    double grad_clip = 10.0;  // <= 0 disables
    int train_interval = 1;   // environment steps per gradient step
    int target_sync_steps = 0;  // 0 syncs at every episode boundary
    std::vector<int> hidden_sizes{24, 24};
    std::uint64_t seed = 1;
    ImitationRollout imitation_rollout = ImitationRollout::Expert;
    ImitationStoredAction imitation_stored_action = ImitationStoredAction::Proposed;
    PhysicsParams physics;
    RewardParams reward;
    PidGains pid;

    /// Throws ConfigError on any out-of-range field.
    void validate() const;
};

/// Throws ConfigError if empty or any budget is non-positive.
void validate_phases(const std::vector<Phase>& phases);

/// Applies one `key = value` setting. Returns false for keys it does not know.
bool apply_setting(TrainConfig& config, std::string_view key, std::string_view value);

/// Every setting `apply_setting` accepts, rendered with current values.
std::vector<std::pair<std::string, std::string>> describe(const TrainConfig& config);

}  // namespace aqil
