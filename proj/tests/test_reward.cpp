#include <cmath>

#include "doctest.h"

#include "aqil/errors.hpp"
#include "aqil/reward.hpp"

using namespace aqil;

TEST_CASE("closed forms") {
    CHECK(imitation_reward(0.0, Action::PushRight, Action::PushRight) == 1.0);
    CHECK(std::abs(imitation_reward(0.0, Action::PushRight, Action::PushLeft) - (0.2 + 0.8 * std::exp(-2.0))) < 1e-9);
    CHECK(std::abs(imitation_reward(0.0, Action::PushRight, Action::PushLeft) - 0.308268) < 1e-6);
    CHECK(std::abs(imitation_reward(10.0, Action::PushLeft, Action::PushLeft) - 0.921306) < 1e-6);
    CHECK(rl_reward(0.0) == 1.0);
    CHECK(std::abs(rl_reward(10.0) - std::exp(-0.5)) < 1e-9);
    CHECK(std::abs(rl_reward(10.0) - 0.606531) < 1e-6);
}

TEST_CASE("reward properties over a sweep of angles") {
    double previous = 2.0;
    for (double theta = 0.0; theta <= 180.0; theta += 0.25) {
        const double r = rl_reward(theta);
        CHECK(r > 0.0);
        CHECK(r <= 1.0);
        CHECK(r <= previous);
        previous = r;
        CHECK(rl_reward(-theta) == r);

        for (Action a : {Action::PushLeft, Action::PushRight}) {
            for (Action b : {Action::PushLeft, Action::PushRight}) {
                const double ri = imitation_reward(theta, a, b);
                CHECK(ri > 0.0);
                CHECK(ri <= 1.0);
                CHECK(ri == imitation_reward(-theta, a, b));
                CHECK(ri == imitation_reward(theta, b, a));
            }
            CHECK(imitation_reward(theta, a, a) == 0.8 + 0.2 * rl_reward(theta));
        }
    }
}

TEST_CASE("maximum only at zero angle with matching actions") {
    CHECK(imitation_reward(1e-3, Action::PushLeft, Action::PushLeft) < 1.0);
    CHECK(imitation_reward(0.0, Action::PushLeft, Action::PushRight) < 1.0);
    CHECK(imitation_reward(0.0, Action::PushLeft, Action::PushLeft) == 1.0);
}

TEST_CASE("reward parameters are validated") {
    RewardParams p;
    CHECK_NOTHROW(p.validate());
    p.sigma1 = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.w_angle = 0.3;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
