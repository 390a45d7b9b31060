#include <cmath>

#include "doctest.h"

#include "aqil/env.hpp"
#include "aqil/expert.hpp"

using namespace aqil;

TEST_CASE("pid formula on an error history") {
    const PidGains gains = PidGains::angle_only();
    PidState state = pid_reset();

    auto d0 = pid_update(0.0, 0.0 - state.previous_error, state, gains);
    CHECK(d0.output == 0.0);
    CHECK(d0.action == Action::PushRight);  // tie
    auto d1 = pid_update(1.0, 1.0 - d0.state.previous_error, d0.state, gains);
    auto d2 = pid_update(2.0, 2.0 - d1.state.previous_error, d1.state, gains);
    CHECK(d2.output == doctest::Approx(2.01875).epsilon(1e-15));
    CHECK(d2.action == Action::PushRight);
    CHECK(d2.state == PidState{3.0, 2.0});
}

TEST_CASE("angle-only pid on cart states reproduces the hand value") {
    const PidGains gains = PidGains::angle_only();
    PidState state;
    PidDecision d{};
    for (double deg : {0.0, 1.0, 2.0}) {
        d = pid_act({0.7, 0.3, radians(deg), 0.5}, state, gains, 0.02);
        state = d.state;
    }
    CHECK(std::abs(d.output - 2.01875) < 1e-12);

    state = {};
    for (double deg : {0.0, -1.0, -2.0}) {
        d = pid_act({0, 0, radians(deg), 0}, state, gains, 0.02);
        state = d.state;
    }
    CHECK(std::abs(d.output + 2.01875) < 1e-12);
    CHECK(d.action == Action::PushLeft);
}

TEST_CASE("reset clears memory") {
    CHECK(pid_reset({5.0, -3.0}) == PidState{});
    CHECK(pid_reset(pid_reset({1, 1})) == pid_reset());

    const PidGains gains = PidGains::angle_only();
    // After reset the derivative sees previous_error 0: u = p*e + i*e + d*e.
    const auto d = pid_update(4.0, 4.0 - pid_reset().previous_error, pid_reset(), gains);
    CHECK(d.output == doctest::Approx((0.6 + 0.00625 + 0.8) * 4.0));
}

TEST_CASE("negating the history flips the action") {
    Rng rng(5);
    for (const PidGains gains : {PidGains{}, PidGains::angle_only()}) {
        for (int trial = 0; trial < 50; ++trial) {
            PidState pos, neg;
            for (int k = 0; k < 20; ++k) {
                const CartState s{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -0.5, 0.5),
                                  uniform(rng, -1, 1)};
                const auto a = pid_act(s, pos, gains, 0.02);
                const auto b = pid_act(-s, neg, gains, 0.02);
                CHECK(a.output == doctest::Approx(-b.output));
                if (a.output != 0.0) CHECK(a.action == flip(b.action));
                pos = a.state;
                neg = b.state;
            }
        }
    }
}

TEST_CASE("expert pushes toward the lean") {
    PidExpert expert;
    CHECK(expert.act({0, 0, radians(3), 0}) == Action::PushRight);
    expert.reset();
    CHECK(expert.act({0, 0, -radians(3), 0}) == Action::PushLeft);
    expert.reset();
    CHECK(expert.state() == PidState{});
}

TEST_CASE("expert keeps the pole up for long episodes") {
    PhysicsParams p;
    p.max_episode_steps = 10000;
    int survived = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CartPole env(p);
        Rng rng(seed);
        PidExpert expert(PidGains{}, p.tau);
        CartState s = env.reset(rng);
        StepOutcome out;
        do {
            out = env.step(expert.act(s));
            s = out.next_state;
        } while (!out.terminal);
        if (!out.failed) ++survived;
    }
    CHECK(survived >= 9);
}
