#include "aqil/config.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "aqil/csv.hpp"
#include "aqil/errors.hpp"

namespace aqil {

std::string_view to_string(Mode mode) {
    return mode == Mode::Imitation ? "imitation" : "reinforcement";
}

Mode parse_mode(std::string_view text) {
    text = trim(text);
    if (text == "imitation" || text == "IL") return Mode::Imitation;
    if (text == "reinforcement" || text == "RL") return Mode::Reinforcement;
    throw ConfigError("unknown phase mode '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
    if (trajectories_per_epoch < 1) throw ConfigError("trajectories_per_epoch must be >= 1");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0, 1]");
    if (!(0.0 <= epsilon_min && epsilon_min <= epsilon_start && epsilon_start <= 1.0))
        throw ConfigError("need 0 <= epsilon_min <= epsilon_start <= 1");
    if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) throw ConfigError("epsilon_decay must lie in (0, 1]");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (replay_capacity < batch_size) throw ConfigError("replay_capacity must be >= batch_size");
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learning_rate must be finite and non-negative");
    if (train_interval < 1) throw ConfigError("train_interval must be >= 1");
    if (target_sync_steps < 0) throw ConfigError("target_sync_steps must be >= 0");
    if (hidden_sizes.empty()) throw ConfigError("hidden_sizes must be non-empty");
    for (int h : hidden_sizes)
        if (h < 1) throw ConfigError("hidden sizes must be positive");
    physics.validate();
    reward.validate();
    if (!std::isfinite(pid.p) || !std::isfinite(pid.i) || !std::isfinite(pid.d) ||
        !std::isfinite(pid.position_weight))
        throw ConfigError("pid gains must be finite");
}

void validate_phases(const std::vector<Phase>& phases) {
    if (phases.empty()) throw ConfigError("phase list is empty");
    for (const auto& p : phases)
        if (p.episodes < 1) throw ConfigError("phase budgets must be positive");
}

namespace {

bool parse_bool(std::string_view v) {
    v = trim(v);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("not a boolean: '" + std::string(v) + "'");
}

std::vector<int> parse_int_list(std::string_view v) {
    std::vector<int> out;
    for (const auto& f : split(v, ',')) out.push_back(static_cast<int>(parse_int(f)));
    return out;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

struct Field {
    std::function<void(TrainConfig&, std::string_view)> set;
    std::function<std::string(const TrainConfig&)> get;
};

template <typename T>
Field real(T TrainConfig::*member) {
    return {[member](TrainConfig& c, std::string_view v) { c.*member = parse_double(v); },
            [member](const TrainConfig& c) { return format_double(c.*member); }};
}

template <typename Sub>
Field nested_real(Sub TrainConfig::*outer, double Sub::*inner) {
    return {[=](TrainConfig& c, std::string_view v) { (c.*outer).*inner = parse_double(v); },
            [=](const TrainConfig& c) { return format_double((c.*outer).*inner); }};
}

template <typename T>
Field integer(T TrainConfig::*member) {
    return {[member](TrainConfig& c, std::string_view v) {
                const long long n = parse_int(v);
                if (n < 0) throw ConfigError("value must be non-negative");
                c.*member = static_cast<T>(n);
            },
            [member](const TrainConfig& c) { return std::to_string(c.*member); }};
}

const std::map<std::string, Field, std::less<>>& fields() {
    static const std::map<std::string, Field, std::less<>> table = [] {
        std::map<std::string, Field, std::less<>> t;
        t["trajectories_per_epoch"] = integer(&TrainConfig::trajectories_per_epoch);
        t["gamma"] = real(&TrainConfig::gamma);
        t["epsilon_start"] = real(&TrainConfig::epsilon_start);
        t["epsilon_min"] = real(&TrainConfig::epsilon_min);
        t["epsilon_decay"] = real(&TrainConfig::epsilon_decay);
        t["restart_epsilon"] = {[](TrainConfig& c, std::string_view v) { c.restart_epsilon = parse_bool(v); },
                                [](const TrainConfig& c) { return std::string(c.restart_epsilon ? "true" : "false"); }};
        t["batch_size"] = integer(&TrainConfig::batch_size);
        t["replay_capacity"] = integer(&TrainConfig::replay_capacity);
        t["learning_rate"] = real(&TrainConfig::learning_rate);
        t["optimizer"] = {[](TrainConfig& c, std::string_view v) {
                              v = trim(v);
                              if (v == "sgd") c.optimizer = OptimizerKind::Sgd;
                              else if (v == "adam") c.optimizer = OptimizerKind::Adam;
                              else throw ConfigError("optimizer must be sgd or adam");
                          },
                          [](const TrainConfig& c) {
                              return std::string(c.optimizer == OptimizerKind::Sgd ? "sgd" : "adam");
                          }};
        t["grad_clip"] = real(&TrainConfig::grad_clip);
        t["train_interval"] = integer(&TrainConfig::train_interval);
        t["target_sync_steps"] = integer(&TrainConfig::target_sync_steps);
        t["hidden_sizes"] = {[](TrainConfig& c, std::string_view v) { c.hidden_sizes = parse_int_list(v); },
                             [](const TrainConfig& c) { return join(c.hidden_sizes); }};
        t["seed"] = integer(&TrainConfig::seed);
        t["imitation_rollout"] = {[](TrainConfig& c, std::string_view v) {
                                      v = trim(v);
                                      if (v == "expert") c.imitation_rollout = ImitationRollout::Expert;
                                      else if (v == "agent") c.imitation_rollout = ImitationRollout::Agent;
                                      else throw ConfigError("imitation_rollout must be expert or agent");
                                  },
                                  [](const TrainConfig& c) {
                                      return std::string(c.imitation_rollout == ImitationRollout::Expert ? "expert" : "agent");
                                  }};
        t["imitation_stored_action"] = {
            [](TrainConfig& c, std::string_view v) {
                v = trim(v);
                if (v == "executed") c.imitation_stored_action = ImitationStoredAction::Executed;
                else if (v == "proposed") c.imitation_stored_action = ImitationStoredAction::Proposed;
                else throw ConfigError("imitation_stored_action must be executed or proposed");
            },
            [](const TrainConfig& c) {
                return std::string(c.imitation_stored_action == ImitationStoredAction::Executed ? "executed" : "proposed");
            }};

        t["gravity"] = nested_real(&TrainConfig::physics, &PhysicsParams::gravity);
        t["cart_mass"] = nested_real(&TrainConfig::physics, &PhysicsParams::cart_mass);
        t["pole_mass"] = nested_real(&TrainConfig::physics, &PhysicsParams::pole_mass);
        t["pole_half_length"] = nested_real(&TrainConfig::physics, &PhysicsParams::pole_half_length);
        t["force_magnitude"] = nested_real(&TrainConfig::physics, &PhysicsParams::force_magnitude);
        t["tau"] = nested_real(&TrainConfig::physics, &PhysicsParams::tau);
        t["x_limit"] = nested_real(&TrainConfig::physics, &PhysicsParams::x_limit);
        t["theta_limit_deg"] = {[](TrainConfig& c, std::string_view v) { c.physics.theta_limit = radians(parse_double(v)); },
                                [](const TrainConfig& c) { return format_double(degrees(c.physics.theta_limit)); }};
        t["max_episode_steps"] = {[](TrainConfig& c, std::string_view v) { c.physics.max_episode_steps = static_cast<int>(parse_int(v)); },
                                  [](const TrainConfig& c) { return std::to_string(c.physics.max_episode_steps); }};

        t["theta_optimal"] = nested_real(&TrainConfig::reward, &RewardParams::theta_optimal);
        t["sigma1"] = nested_real(&TrainConfig::reward, &RewardParams::sigma1);
        t["sigma2"] = nested_real(&TrainConfig::reward, &RewardParams::sigma2);
        t["w_angle"] = nested_real(&TrainConfig::reward, &RewardParams::w_angle);
        t["w_action"] = nested_real(&TrainConfig::reward, &RewardParams::w_action);

        t["pid_p"] = nested_real(&TrainConfig::pid, &PidGains::p);
        t["pid_i"] = nested_real(&TrainConfig::pid, &PidGains::i);
        t["pid_d"] = nested_real(&TrainConfig::pid, &PidGains::d);
        t["pid_position_weight"] = nested_real(&TrainConfig::pid, &PidGains::position_weight);
        t["pid_derivative"] = {[](TrainConfig& c, std::string_view v) {
                                   v = trim(v);
                                   if (v == "measured_rate") c.pid.derivative = DerivativeSource::MeasuredRate;
                                   else if (v == "error_difference") c.pid.derivative = DerivativeSource::ErrorDifference;
                                   else throw ConfigError("pid_derivative must be measured_rate or error_difference");
                               },
                               [](const TrainConfig& c) {
                                   return std::string(c.pid.derivative == DerivativeSource::MeasuredRate ? "measured_rate" : "error_difference");
                               }};
        return t;
    }();
    return table;
}

}  // namespace

bool apply_setting(TrainConfig& config, std::string_view key, std::string_view value) {
    const auto it = fields().find(trim(key));
    if (it == fields().end()) return false;
    try {
        it->second.set(config, value);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string(trim(key)) + ": " + e.what());
    }
    return true;
}

std::vector<std::pair<std::string, std::string>> describe(const TrainConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [key, field] : fields()) out.emplace_back(key, field.get(config));
    return out;
}

}  // namespace aqil
