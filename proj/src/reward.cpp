#include "aqil/reward.hpp"

#include <cmath>

#include "aqil/errors.hpp"

namespace aqil {
namespace {

double gaussian(double delta, double sigma) {
    const double z = delta / sigma;
    return std::exp(-0.5 * z * z);
}

}  // namespace

void RewardParams::validate() const {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw ConfigError("reward: sigmas must be positive");
    if (std::abs(w_angle + w_action - 1.0) > 1e-12)
        throw ConfigError("reward: w_angle + w_action must equal 1");
    if (!std::isfinite(theta_optimal)) throw ConfigError("reward: theta_optimal must be finite");
}

double imitation_reward(double theta_deg, Action a_pid, Action a_model, const RewardParams& params) {
    const double action_delta = static_cast<double>(index_of(a_pid) - index_of(a_model));
    return params.w_angle * gaussian(params.theta_optimal - theta_deg, params.sigma1) +
           params.w_action * gaussian(action_delta, params.sigma2);
}

double rl_reward(double theta_deg, const RewardParams& params) {
    return gaussian(params.theta_optimal - theta_deg, params.sigma1);
}

}  // namespace aqil
