#include "aqil/env.hpp"

#include <cmath>
#include <string>

#include "aqil/errors.hpp"

namespace aqil {

bool CartState::is_finite() const {
    return std::isfinite(x) && std::isfinite(x_dot) && std::isfinite(theta) &&
           std::isfinite(theta_dot);
}

void PhysicsParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError(std::string("physics: ") + name + " must be positive and finite");
    };
    positive(gravity, "gravity");
    positive(cart_mass, "cart_mass");
    positive(pole_mass, "pole_mass");
    positive(pole_half_length, "pole_half_length");
    positive(force_magnitude, "force_magnitude");
    positive(tau, "tau");
    positive(x_limit, "x_limit");
    if (!(theta_limit > 0.0 && theta_limit <= std::numbers::pi / 2))
        throw ConfigError("physics: theta_limit must lie in (0, pi/2]");
    if (max_episode_steps < 1) throw ConfigError("physics: max_episode_steps must be >= 1");
}

CartState integrate(const PhysicsParams& p, const CartState& s, Action action) {
    if (!s.is_finite()) throw NumericalError("cart-pole step on a non-finite state");

    const double force = action == Action::PushRight ? p.force_magnitude : -p.force_magnitude;
    const double total_mass = p.cart_mass + p.pole_mass;
    const double polemass_length = p.pole_mass * p.pole_half_length;
    const double cos_t = std::cos(s.theta);
    const double sin_t = std::sin(s.theta);

    const double temp = (force + polemass_length * s.theta_dot * s.theta_dot * sin_t) / total_mass;
    const double theta_acc =
        (p.gravity * sin_t - cos_t * temp) /
        (p.pole_half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
    const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;

    return {s.x + p.tau * s.x_dot, s.x_dot + p.tau * x_acc, s.theta + p.tau * s.theta_dot,
            s.theta_dot + p.tau * theta_acc};
}

bool out_of_bounds(const PhysicsParams& p, const CartState& s) {
    return std::abs(s.theta) > p.theta_limit || std::abs(s.x) > p.x_limit;
}

CartPole::CartPole(PhysicsParams params) : params_(params) { params_.validate(); }

CartState CartPole::reset_to(const CartState& state) {
    if (!state.is_finite()) throw NumericalError("cart-pole reset to a non-finite state");
    state_ = state;
    steps_ = 0;
    return state_;
}

StepOutcome CartPole::step(Action action) {
    state_ = integrate(params_, state_, action);
    ++steps_;
    StepOutcome out;
    out.next_state = state_;
    out.failed = out_of_bounds(params_, state_);
    out.terminal = out.failed || steps_ >= params_.max_episode_steps;
    out.steps_elapsed = steps_;
    return out;
}

}  // namespace aqil
