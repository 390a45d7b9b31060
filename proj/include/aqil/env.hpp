#pragma once

#include <numbers>

#include <Eigen/Dense>

#include "aqil/random.hpp"

namespace aqil {

inline constexpr double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }
inline constexpr double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

/// Cart-pole physical state. theta is in radians, 0 = upright, positive = leaning right.
struct CartState {
    double x = 0.0;
    double x_dot = 0.0;
    double theta = 0.0;
    double theta_dot = 0.0;

    double theta_degrees() const { return degrees(theta); }
    bool is_finite() const;
    Eigen::Vector4d vector() const { return {x, x_dot, theta, theta_dot}; }

    friend bool operator==(const CartState&, const CartState&) = default;
};

inline CartState operator-(const CartState& s) {
    return {-s.x, -s.x_dot, -s.theta, -s.theta_dot};
}

enum class Action : int { PushLeft = 0, PushRight = 1 };

inline constexpr int index_of(Action a) { return static_cast<int>(a); }
inline constexpr Action action_from_index(int i) { return i == 0 ? Action::PushLeft : Action::PushRight; }
inline constexpr Action flip(Action a) {
    return a == Action::PushLeft ? Action::PushRight : Action::PushLeft;
}

struct PhysicsParams {
    double gravity = 9.8;
    double cart_mass = 1.0;
    double pole_mass = 0.1;
    double pole_half_length = 0.5;
    double force_magnitude = 10.0;
    double tau = 0.02;
    double theta_limit = radians(50.0);
    double x_limit = 2.4;
    int max_episode_steps = 50000;

    /// Throws ConfigError when any constant is out of range.
    void validate() const;
};

struct StepOutcome {
    CartState next_state;
    /// Episode is over: failure or step cap.
    bool terminal = false;
    /// Pole or cart left the admissible region. A step-cap-only ending has
    /// terminal set and failed clear.
    bool failed = false;
    int steps_elapsed = 0;
};

/// One explicit Euler step of the cart-pole equations of motion.
/// Throws NumericalError on a non-finite input state.
CartState integrate(const PhysicsParams& params, const CartState& state, Action action);

/// True when the state is past the angle or position limit.
bool out_of_bounds(const PhysicsParams& params, const CartState& state);

/// Episode lifecycle around `integrate`: owns the current state and step counter.
class CartPole {
public:
    explicit CartPole(PhysicsParams params = {});

    /// Draws every component uniformly from [-0.05, 0.05] and zeroes the step counter.
    template <FullRangeGenerator G>
    CartState reset(G& gen) {
        CartState s;
        s.x = uniform(gen, -0.05, 0.05);
        s.x_dot = uniform(gen, -0.05, 0.05);
        s.theta = uniform(gen, -0.05, 0.05);
        s.theta_dot = uniform(gen, -0.05, 0.05);
        return reset_to(s);
    }

    /// Starts an episode from a given state.
    CartState reset_to(const CartState& state);

    StepOutcome step(Action action);

    const CartState& state() const { return state_; }
    int steps_elapsed() const { return steps_; }
    const PhysicsParams& params() const { return params_; }

private:
    PhysicsParams params_;
    CartState state_;
    int steps_ = 0;
};

}  // namespace aqil
