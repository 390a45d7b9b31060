#pragma once

#include "aqil/env.hpp"

namespace aqil {

/// Gaussian reward shape. Angles in degrees; the action difference uses the
/// 0/1 action encoding.
struct RewardParams {
    double theta_optimal = 0.0;
    double sigma1 = 10.0;
    double sigma2 = 0.5;
    double w_angle = 0.2;
    double w_action = 0.8;

    void validate() const;
};

/// Expert-adherence reward used during imitation:
/// w_angle * N(theta; theta_optimal, sigma1) + w_action * N(a_pid - a_model; 0, sigma2),
/// with unnormalized Gaussians.
double imitation_reward(double theta_deg, Action a_pid, Action a_model, const RewardParams& params = {});

/// Angle-only environment reward used during reinforcement and evaluation.
double rl_reward(double theta_deg, const RewardParams& params = {});

}  // namespace aqil
