#pragma once

#include <cmath>
#include <stdexcept>

#include "aqil/qnet.hpp"

namespace aqil {

/// Plain gradient descent: every parameter -= learning_rate * gradient.
template <typename Scalar>
void sgd_step(QNetwork<Scalar>& net, const GradientSet<Scalar>& grads, Scalar learning_rate) {
    if (!grads.congruent_with(net)) throw std::invalid_argument("sgd_step: gradient shape mismatch");
    for (std::size_t l = 0; l < net.depth(); ++l) {
        auto& layer = net.layer(l);
        layer.weights -= learning_rate * grads.layers[l].weights;
        layer.bias -= learning_rate * grads.layers[l].bias;
    }
}

/// Rescales the gradient to at most `max_norm` (global L2). Returns the norm before clipping.
template <typename Scalar>
Scalar clip_gradient_norm(GradientSet<Scalar>& grads, Scalar max_norm) {
    const Scalar norm = std::sqrt(grads.squared_norm());
    if (max_norm > Scalar(0) && norm > max_norm) grads.scale(max_norm / norm);
    return norm;
}

/// Adam with bias correction. Keeps its moment estimates per parameter.
template <typename Scalar>
class Adam {
public:
    explicit Adam(Scalar learning_rate, Scalar beta1 = 0.9, Scalar beta2 = 0.999, Scalar eps = 1e-8)
        : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void step(QNetwork<Scalar>& net, const GradientSet<Scalar>& grads) {
        if (!grads.congruent_with(net)) throw std::invalid_argument("adam: gradient shape mismatch");
        if (!first_.congruent_with(net)) {
            first_ = GradientSet<Scalar>::zeros_like(net);
            second_ = GradientSet<Scalar>::zeros_like(net);
            t_ = 0;
        }
        ++t_;
        const Scalar c1 = Scalar(1) - std::pow(beta1_, static_cast<Scalar>(t_));
        const Scalar c2 = Scalar(1) - std::pow(beta2_, static_cast<Scalar>(t_));
        for (std::size_t l = 0; l < net.depth(); ++l) {
            auto& layer = net.layer(l);
            update(layer.weights, first_.layers[l].weights, second_.layers[l].weights,
                   grads.layers[l].weights, c1, c2);
            update(layer.bias, first_.layers[l].bias, second_.layers[l].bias, grads.layers[l].bias, c1,
                   c2);
        }
    }

private:
    template <typename P, typename G>
    void update(P& param, G& m, G& v, const G& g, Scalar c1, Scalar c2) {
        m = beta1_ * m + (Scalar(1) - beta1_) * g;
        v = beta2_ * v + (Scalar(1) - beta2_) * g.cwiseProduct(g);
        param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    }

    Scalar lr_, beta1_, beta2_, eps_;
    GradientSet<Scalar> first_, second_;
    long t_ = 0;
};

}  // namespace aqil
