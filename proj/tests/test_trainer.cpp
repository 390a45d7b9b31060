#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "aqil/errors.hpp"
#include "aqil/experiment.hpp"
#include "aqil/reward.hpp"
#include "aqil/trainer.hpp"

using namespace aqil;

namespace {

TrainConfig small_config() {
    TrainConfig c;
    c.hidden_sizes = {8};
    c.batch_size = 16;
    c.replay_capacity = 500;
    c.physics.max_episode_steps = 200;
    c.seed = 3;
    return c;
}

// Single-output-layer network whose Q-values are the given constants.
QNetwork<double> constant_net(double left, double right) {
    auto net = QNetwork<double>::zeros(std::vector<int>{2});
    net.layer(1).bias << left, right;
    return net;
}

// Hidden units relu(u) and relu(-u) for a linear score u(s); Q = (relu(-u), relu(u)).
QNetwork<double> linear_policy_net(const Eigen::Vector4d& score) {
    auto net = QNetwork<double>::zeros(std::vector<int>{2});
    net.layer(0).weights.row(0) = score.transpose();
    net.layer(0).weights.row(1) = -score.transpose();
    net.layer(1).weights(0, 1) = 1.0;
    net.layer(1).weights(1, 0) = 1.0;
    return net;
}

}  // namespace

TEST_CASE("epsilon-greedy selection") {
    Rng rng(1);
    CHECK(select_action(constant_net(1.0, 2.0), {}, 0.0, rng) == Action::PushRight);
    CHECK(select_action(constant_net(0.5, 0.5), {}, 0.0, rng) == Action::PushLeft);
    CHECK(select_action(constant_net(3.0, 2.0), {}, 0.0, rng) == Action::PushLeft);

    int right = 0;
    const auto net = constant_net(0.0, 5.0);
    for (int i = 0; i < 10000; ++i) right += select_action(net, {}, 1.0, rng) == Action::PushRight;
    CHECK(std::abs(right / 10000.0 - 0.5) <= 0.03);
}

TEST_CASE("replay buffer is a bounded FIFO") {
    ReplayBuffer buffer(3);
    Rng rng(1);
    CHECK_THROWS(buffer.sample(1, rng));
    for (int i = 0; i < 5; ++i) {
        Transition t;
        t.reward = i;
        buffer.push(t);
        CHECK(buffer.size() <= 3);
    }
    CHECK(buffer.size() == 3);
    CHECK(buffer[0].reward == 2.0);
    CHECK(buffer[1].reward == 3.0);
    CHECK(buffer[2].reward == 4.0);
    CHECK_THROWS(buffer.sample(4, rng));
    for (int i = 0; i < 30; ++i)
        for (const auto& t : buffer.sample(3, rng)) CHECK(t.reward >= 2.0);
    CHECK_THROWS_AS(ReplayBuffer(0), std::invalid_argument);
}

TEST_CASE("imitation episode: expert acts and reward follows the agent's agreement") {
    Trainer trainer(small_config());
    std::vector<StepRecord> steps;
    trainer.set_step_observer([&](const StepRecord& r) { steps.push_back(r); });
    const EpisodeLog log = trainer.run_imitation_episode(0.5);

    REQUIRE(!steps.empty());
    CHECK(log.steps == static_cast<int>(steps.size()));
    double score = 0.0;
    for (const auto& r : steps) {
        REQUIRE(r.expert.has_value());
        CHECK(r.executed == *r.expert);
        CHECK(r.reward == imitation_reward(r.state.theta_degrees(), *r.expert, r.proposed));
        CHECK((r.reward >= 0.8) == (r.proposed == *r.expert));
        if (r.proposed == *r.expert) CHECK(r.reward == 0.8 + 0.2 * rl_reward(r.state.theta_degrees()));
        CHECK(r.stored.reward == r.reward);
        CHECK(r.stored.action == r.proposed);
        score += r.reward;
    }
    CHECK(log.score == doctest::Approx(score));
    CHECK(trainer.counters().imitation_steps == log.steps);
    CHECK(trainer.counters().imitation_steps_expert_executed == log.steps);
    CHECK(trainer.counters().imitation_rewards == log.steps);
    CHECK(trainer.counters().rl_rewards == 0);
}

TEST_CASE("imitation stores the executed action when configured") {
    auto config = small_config();
    config.imitation_stored_action = ImitationStoredAction::Executed;
    Trainer trainer(config);
    trainer.set_step_observer([&](const StepRecord& r) { CHECK(r.stored.action == r.executed); });
    trainer.run_imitation_episode(1.0);

    config.imitation_rollout = ImitationRollout::Agent;
    Trainer agent_driven(config);
    agent_driven.set_step_observer([&](const StepRecord& r) { CHECK(r.executed == r.proposed); });
    agent_driven.run_imitation_episode(1.0);
}

TEST_CASE("a policy that matches the expert earns the saturated imitation reward") {
    auto config = small_config();
    config.pid.i = 0.0;  // PD expert: a linear decision rule the network can represent exactly
    config.batch_size = 256;  // no learning within the episode
    config.physics.max_episode_steps = 200;
    Trainer trainer(config);
    const double tau = config.physics.tau, to_deg = 180.0 / std::numbers::pi;
    const Eigen::Vector4d score{config.pid.p * config.pid.position_weight, 0.0, config.pid.p * to_deg,
                                config.pid.d * to_deg * tau};
    trainer.set_network(linear_policy_net(score));

    int checked = 0;
    trainer.set_step_observer([&](const StepRecord& r) {
        CHECK(r.proposed == *r.expert);
        CHECK(r.reward == 0.8 + 0.2 * rl_reward(r.state.theta_degrees()));
        ++checked;
    });
    trainer.run_imitation_episode(0.0);
    CHECK(checked == 200);
    CHECK(trainer.counters().gradient_steps == 0);
}

TEST_CASE("scripted three-step episodes reproduce hand-evaluated rewards") {
    auto config = small_config();
    config.physics.max_episode_steps = 3;

    for (Mode mode : {Mode::Imitation, Mode::Reinforcement}) {
        Trainer trainer(config);
        std::vector<StepRecord> steps;
        trainer.set_step_observer([&](const StepRecord& r) { steps.push_back(r); });
        const auto log = mode == Mode::Imitation ? trainer.run_imitation_episode(1.0)
                                                 : trainer.run_reinforcement_episode(1.0);
        REQUIRE(steps.size() == 3);
        CHECK(log.steps == 3);

        // Replay the rollout from its first state with an independent expert instance.
        CartState s = steps[0].state;
        PidExpert expert(config.pid, config.physics.tau);
        double score = 0.0;
        for (const auto& r : steps) {
            CHECK(r.state == s);
            const double theta_deg = s.theta * 180.0 / std::numbers::pi;
            double expected = 0.0;
            if (mode == Mode::Imitation) {
                const Action a_pid = expert.act(s);
                CHECK(r.executed == a_pid);
                const double da = index_of(a_pid) - index_of(r.proposed);
                expected = 0.2 * std::exp(-0.5 * (theta_deg / 10) * (theta_deg / 10)) +
                           0.8 * std::exp(-0.5 * (da / 0.5) * (da / 0.5));
            } else {
                CHECK_FALSE(r.expert.has_value());
                CHECK(r.executed == r.proposed);
                expected = std::exp(-0.5 * (theta_deg / 10) * (theta_deg / 10));
            }
            CHECK(r.reward == doctest::Approx(expected).epsilon(1e-14));
            score += expected;
            s = integrate(config.physics, s, r.executed);
            CHECK(r.stored.next_state == s);
        }
        CHECK(log.score == doctest::Approx(score).epsilon(1e-14));
        CHECK(steps.back().episode_over);
        CHECK_FALSE(steps.back().stored.terminal);  // step cap, not failure
    }
}

TEST_CASE("reinforcement episode: agent acts, environment reward, terminal transitions") {
    auto config = small_config();
    config.physics.max_episode_steps = 5000;
    Trainer trainer(config);
    std::vector<StepRecord> steps;
    trainer.set_step_observer([&](const StepRecord& r) { steps.push_back(r); });
    trainer.set_network(constant_net(0.0, 1.0));  // always pushes right: falls quickly
    trainer.run_reinforcement_episode(0.0);

    REQUIRE(!steps.empty());
    for (const auto& r : steps) {
        CHECK(r.executed == r.proposed);
        CHECK_FALSE(r.expert.has_value());
        CHECK(r.reward == rl_reward(r.state.theta_degrees()));
    }
    const auto& last = steps.back();
    CHECK(last.episode_over);
    CHECK(last.stored.terminal);
    CHECK(bellman_target(last.stored.reward, last.stored.next_state, last.stored.terminal, trainer.target(),
                         config.gamma) == last.stored.reward);
    CHECK(trainer.counters().imitation_rewards == 0);
    CHECK(trainer.counters().rl_rewards == static_cast<long long>(steps.size()));
}

TEST_CASE("maximal reward every step scores the episode length") {
    auto config = small_config();
    config.reward.sigma1 = 1e30;
    Trainer trainer(config);
    const auto log = trainer.run_reinforcement_episode(0.5);
    CHECK(log.score == static_cast<double>(log.steps));
}

TEST_CASE("training across phases") {
    auto config = small_config();
    config.epsilon_decay = 0.9;
    Trainer trainer(config);
    std::vector<StepRecord> steps;
    trainer.set_step_observer([&](const StepRecord& r) { steps.push_back(r); });
    const auto result = trainer.train({{Mode::Imitation, 3}, {Mode::Reinforcement, 2}});

    REQUIRE(result.logs.size() == 5);
    CHECK(result.phase_starts == std::vector<std::size_t>{0, 3});
    CHECK(result.logs[0].epsilon == 1.0);
    CHECK(result.logs[1].epsilon == doctest::Approx(0.9));
    CHECK(result.logs[3].epsilon == doctest::Approx(0.729));  // continues across the boundary
    for (int i = 0; i < 5; ++i) {
        CHECK(result.logs[static_cast<std::size_t>(i)].episode == i + 1);
        CHECK(result.logs[static_cast<std::size_t>(i)].phase == (i < 3 ? Mode::Imitation : Mode::Reinforcement));
        CHECK(result.logs[static_cast<std::size_t>(i)].steps >= 1);
        CHECK(result.logs[static_cast<std::size_t>(i)].score > 0.0);
        CHECK(result.logs[static_cast<std::size_t>(i)].mean_loss >= 0.0);
    }

    config.restart_epsilon = true;
    const auto restarted = Trainer(config).train({{Mode::Imitation, 3}, {Mode::Reinforcement, 2}});
    CHECK(restarted.logs[2].epsilon == doctest::Approx(0.81));
    CHECK(restarted.logs[3].epsilon == 1.0);

    // Behavior policy and reward source per mode.
    for (const auto& r : steps) {
        if (r.mode == Mode::Imitation) CHECK(r.executed == *r.expert);
        else CHECK_FALSE(r.expert.has_value());
    }
    const auto& counters = result.counters;
    CHECK(counters.imitation_rewards == counters.imitation_steps);
    CHECK(counters.rl_rewards == counters.reinforcement_steps);
    CHECK(counters.gradient_steps > 0);
    CHECK(counters.min_buffer_at_gradient_step >= config.batch_size);
    CHECK(trainer.buffer().size() <= config.replay_capacity);
}

TEST_CASE("no gradient step before the buffer holds a batch") {
    auto config = small_config();
    config.batch_size = 64;
    config.physics.max_episode_steps = 10;
    Trainer trainer(config);
    long long seen_steps = 0;
    trainer.set_step_observer([&](const StepRecord&) {
        ++seen_steps;
        const long long expected = std::max<long long>(0, seen_steps - 63);
        CHECK(trainer.counters().gradient_steps == expected);
    });
    trainer.train({{Mode::Imitation, 10}});
}

TEST_CASE("target syncs at episode boundaries or every N gradient steps") {
    auto config = small_config();
    config.physics.max_episode_steps = 50;
    Trainer by_episode(config);
    by_episode.train({{Mode::Imitation, 4}});
    CHECK(by_episode.counters().target_syncs == 4);
    const CartState s{0.01, 0.02, 0.03, 0.04};
    CHECK(by_episode.target().forward(s) == q_values(by_episode.network(), s));

    config.target_sync_steps = 10;
    Trainer by_steps(config);
    by_steps.train({{Mode::Imitation, 4}});
    CHECK(by_steps.counters().target_syncs == by_steps.counters().gradient_steps / 10);
}

TEST_CASE("single-step imitation run") {
    auto config = small_config();
    config.physics.max_episode_steps = 1;
    const auto result = train(config, {{Mode::Imitation, 1}});
    REQUIRE(result.logs.size() == 1);
    CHECK(result.logs[0].steps == 1);
    CHECK(result.logs[0].mean_loss == 0.0);
    CHECK(result.counters.gradient_steps == 0);
}

TEST_CASE("trajectories per epoch multiply the episode count") {
    auto config = small_config();
    config.trajectories_per_epoch = 3;
    config.physics.max_episode_steps = 20;
    CHECK(train(config, {{Mode::Reinforcement, 2}}).logs.size() == 6);
}

TEST_CASE("seeded runs are reproducible") {
    auto config = small_config();
    const std::vector<Phase> phases{{Mode::Imitation, 3}, {Mode::Reinforcement, 3}};
    const auto a = train(config, phases);
    const auto b = train(config, phases);
    std::ostringstream ca, cb;
    write_episode_csv(ca, a.logs);
    write_episode_csv(cb, b.logs);
    CHECK(ca.str() == cb.str());

    config.seed = 4;
    std::ostringstream cc;
    write_episode_csv(cc, train(config, phases).logs);
    CHECK(cc.str() != ca.str());
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(train(small_config(), {}), ConfigError);
    CHECK_THROWS_AS(train(small_config(), {{Mode::Imitation, 0}}), ConfigError);
    auto config = small_config();
    config.gamma = 1.5;
    CHECK_THROWS_AS(Trainer{config}, ConfigError);
    config = small_config();
    config.epsilon_min = 0.5;
    config.epsilon_start = 0.2;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = small_config();
    config.epsilon_decay = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}
