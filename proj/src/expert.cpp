#include "aqil/expert.hpp"

namespace aqil {

PidDecision pid_update(double error, double rate, const PidState& state, const PidGains& gains) {
    const double u = gains.p * error + gains.i * (state.integral + error) + gains.d * rate;
    return {u >= 0.0 ? Action::PushRight : Action::PushLeft, {state.integral + error, error}, u};
}

PidDecision pid_act(const CartState& s, const PidState& state, const PidGains& gains, double tau) {
    const double error = s.theta_degrees() + gains.position_weight * s.x;
    const double rate = gains.derivative == DerivativeSource::ErrorDifference
                            ? error - state.previous_error
                            : degrees(s.theta_dot) * tau;
    return pid_update(error, rate, state, gains);
}

}  // namespace aqil
