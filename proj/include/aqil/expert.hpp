#pragma once

#include "aqil/env.hpp"

namespace aqil {

/// Where the PID derivative term gets its rate of change.
enum class DerivativeSource {
    /// Error minus the previous step's error.
    ErrorDifference,
    /// Measured pole angular velocity, in degrees per integration step.
    MeasuredRate,
};

/// Gains act on an error measured in degrees, with per-step integral and
/// derivative (no dt scaling).
struct PidGains {
    double p = 0.6;
    double i = 0.00625;
    double d = 0.8;
    /// Degrees of error added per meter of cart displacement. Biases the
    /// setpoint so the cart is steered back toward the center.
    double position_weight = 1.0;
    DerivativeSource derivative = DerivativeSource::MeasuredRate;

    /// Pure angle PID with a backward-difference derivative.
    static PidGains angle_only() {
        return {0.6, 0.00625, 0.8, 0.0, DerivativeSource::ErrorDifference};
    }
};

struct PidState {
    double integral = 0.0;
    double previous_error = 0.0;

    friend bool operator==(const PidState&, const PidState&) = default;
};

inline PidState pid_reset(const PidState& = {}) { return {}; }

struct PidDecision {
    Action action;
    PidState state;
    double output;
};

/// u = p*e + i*(integral + e) + d*rate. Non-negative u pushes right.
PidDecision pid_update(double error, double rate, const PidState& state, const PidGains& gains);

/// Full expert step on a cart state. `tau` converts angular velocity into a
/// per-step rate when the derivative is taken on measurement.
PidDecision pid_act(const CartState& s, const PidState& state, const PidGains& gains, double tau);

/// Stateful expert policy for rollouts.
class PidExpert {
public:
    explicit PidExpert(PidGains gains = {}, double tau = PhysicsParams{}.tau)
        : gains_(gains), tau_(tau) {}

    void reset() { state_ = pid_reset(state_); }

    Action act(const CartState& s) {
        const PidDecision decision = pid_act(s, state_, gains_, tau_);
        state_ = decision.state;
        return decision.action;
    }

    const PidState& state() const { return state_; }
    const PidGains& gains() const { return gains_; }

private:
    PidGains gains_;
    double tau_;
    PidState state_;
};

}  // namespace aqil
