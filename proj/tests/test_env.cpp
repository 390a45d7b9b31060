#include <cmath>
#include <cstdint>
#include <limits>

#include "doctest.h"

#include "aqil/env.hpp"
#include "aqil/errors.hpp"

using namespace aqil;

namespace {

// Independent straight-line transcription of the cart-pole equations with the
// default constants written out literally.
CartState reference_step(const CartState& s, int action) {
    const double force = action == 1 ? 10.0 : -10.0;
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    const double temp = (force + 0.1 * 0.5 * s.theta_dot * s.theta_dot * sn) / 1.1;
    const double tacc = (9.8 * sn - c * temp) / (0.5 * (4.0 / 3.0 - 0.1 * c * c / 1.1));
    const double xacc = temp - 0.1 * 0.5 * tacc * c / 1.1;
    return {s.x + 0.02 * s.x_dot, s.x_dot + 0.02 * xacc, s.theta + 0.02 * s.theta_dot, s.theta_dot + 0.02 * tacc};
}

// Returns the midpoint of its range on every call, so a uniform draw maps to 0.5.
struct MidpointGenerator {
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return result_type{1} << 63; }
};

}  // namespace

TEST_CASE("step from rest matches hand-evaluated dynamics") {
    const PhysicsParams p;
    const CartState right = integrate(p, {}, Action::PushRight);
    CHECK(right.x == 0.0);
    CHECK(std::abs(right.x_dot - 0.195122) < 1e-6);
    CHECK(right.theta == 0.0);
    CHECK(std::abs(right.theta_dot - (-0.292683)) < 1e-6);

    const CartState left = integrate(p, {}, Action::PushLeft);
    CHECK(left.x_dot == -right.x_dot);
    CHECK(left.theta_dot == -right.theta_dot);
}

TEST_CASE("dynamics agree with an independent transcription") {
    Rng rng(7);
    const PhysicsParams p;
    for (int i = 0; i < 100; ++i) {
        const CartState s{uniform(rng, -2.4, 2.4), uniform(rng, -3, 3), uniform(rng, -0.8, 0.8),
                          uniform(rng, -4, 4)};
        const int a = static_cast<int>(uniform_index(rng, 2));
        const CartState got = integrate(p, s, action_from_index(a));
        const CartState want = reference_step(s, a);
        CHECK(std::abs(got.x - want.x) <= 1e-12);
        CHECK(std::abs(got.x_dot - want.x_dot) <= 1e-12);
        CHECK(std::abs(got.theta - want.theta) <= 1e-12);
        CHECK(std::abs(got.theta_dot - want.theta_dot) <= 1e-12);
    }
}

TEST_CASE("mirror symmetry") {
    Rng rng(11);
    const PhysicsParams p;
    for (int i = 0; i < 200; ++i) {
        const CartState s{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -0.8, 0.8), uniform(rng, -3, 3)};
        const Action a = action_from_index(static_cast<int>(uniform_index(rng, 2)));
        const CartState lhs = integrate(p, -s, flip(a));
        const CartState rhs = -integrate(p, s, a);
        CHECK(std::abs(lhs.x - rhs.x) <= 1e-12);
        CHECK(std::abs(lhs.x_dot - rhs.x_dot) <= 1e-12);
        CHECK(std::abs(lhs.theta - rhs.theta) <= 1e-12);
        CHECK(std::abs(lhs.theta_dot - rhs.theta_dot) <= 1e-12);
    }
}

TEST_CASE("reset draws within bounds and is deterministic") {
    CartPole env;
    Rng a(3), b(3);
    for (int i = 0; i < 1000; ++i) {
        const CartState s = env.reset(a);
        CHECK(std::abs(s.x) <= 0.05);
        CHECK(std::abs(s.x_dot) <= 0.05);
        CHECK(std::abs(s.theta) <= 0.05);
        CHECK(std::abs(s.theta_dot) <= 0.05);
        CHECK(env.steps_elapsed() == 0);
        CHECK(env.reset(b) == s);
    }

    MidpointGenerator mid;
    CHECK(env.reset(mid) == CartState{});
}

TEST_CASE("termination rules") {
    PhysicsParams p;
    CartPole env(p);

    SUBCASE("pole past the angle limit") {
        env.reset_to({0, 0, radians(51.0), 0});
        CHECK(env.step(Action::PushLeft).terminal);
        env.reset_to({0, 0, radians(51.0), 0});
        const auto out = env.step(Action::PushRight);
        CHECK(out.terminal);
        CHECK(out.failed);
    }
    SUBCASE("cart past the track limit") {
        env.reset_to({2.399, 1.0, 0, 0});
        const auto out = env.step(Action::PushRight);
        CHECK(out.terminal);
        CHECK(out.failed);
    }
    SUBCASE("step cap ends the episode without failure") {
        p.max_episode_steps = 3;
        CartPole capped(p);
        capped.reset_to({});
        CHECK_FALSE(capped.step(Action::PushRight).terminal);
        CHECK_FALSE(capped.step(Action::PushLeft).terminal);
        const auto out = capped.step(Action::PushRight);
        CHECK(out.terminal);
        CHECK_FALSE(out.failed);
        CHECK(out.steps_elapsed == 3);
        CHECK(capped.step(Action::PushLeft).terminal);
    }
    SUBCASE("default limit is 50 degrees") {
        CHECK(p.theta_limit == doctest::Approx(radians(50.0)));
        CHECK_FALSE(out_of_bounds(p, {0, 0, radians(49.9), 0}));
        CHECK(out_of_bounds(p, {0, 0, -radians(50.1), 0}));
    }
}

TEST_CASE("non-finite state is rejected") {
    const PhysicsParams p;
    CHECK_THROWS_AS(integrate(p, {std::nan(""), 0, 0, 0}, Action::PushLeft), NumericalError);
    CHECK_THROWS_AS(integrate(p, {0, 0, 0, std::numeric_limits<double>::infinity()}, Action::PushLeft),
                    NumericalError);
}

TEST_CASE("physics parameters are validated") {
    PhysicsParams p;
    p.tau = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.theta_limit = 2.0;
    CHECK_THROWS_AS(CartPole{p}, ConfigError);
    p = {};
    p.max_episode_steps = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}
