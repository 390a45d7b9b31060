#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aqil/env.hpp"
#include "aqil/errors.hpp"
#include "aqil/random.hpp"

namespace aqil {

enum class Activation { ReLU, Linear };

template <typename Scalar>
struct DenseLayer {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Matrix weights;  // outputs x inputs
    Vector bias;     // outputs
    Activation activation = Activation::Linear;

    Eigen::Index inputs() const { return weights.cols(); }
    Eigen::Index outputs() const { return weights.rows(); }
};

/// Fully connected Q-function approximator: CartState (4) -> one value per Action (2).
/// Hidden layers use ReLU, the output layer is linear.
template <typename Scalar>
class QNetwork {
public:
    using Layer = DenseLayer<Scalar>;
    using Matrix = typename Layer::Matrix;
    using Vector = typename Layer::Vector;
    using Input = Eigen::Matrix<Scalar, 4, 1>;
    using QValues = Eigen::Matrix<Scalar, 2, 1>;

    static constexpr Eigen::Index kInputDim = 4;
    static constexpr Eigen::Index kOutputDim = 2;

    QNetwork() = default;

    explicit QNetwork(std::vector<Layer> layers) : layers_(std::move(layers)) { check_shape(); }

    /// All-zero parameters with the given hidden widths.
    static QNetwork zeros(std::span<const int> hidden_sizes) {
        const auto dims = chain(hidden_sizes);
        std::vector<Layer> layers;
        for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
            Layer layer;
            layer.weights = Matrix::Zero(dims[l + 1], dims[l]);
            layer.bias = Vector::Zero(dims[l + 1]);
            layer.activation = l + 2 == dims.size() ? Activation::Linear : Activation::ReLU;
            layers.push_back(std::move(layer));
        }
        return QNetwork(std::move(layers));
    }

    /// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], zero biases.
    template <FullRangeGenerator G>
    static QNetwork random(std::span<const int> hidden_sizes, G& gen) {
        QNetwork net = zeros(hidden_sizes);
        for (auto& layer : net.layers_) {
            const double scale = 1.0 / std::sqrt(static_cast<double>(layer.inputs()));
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
                    layer.weights(r, c) = static_cast<Scalar>(uniform(gen, -scale, scale));
        }
        return net;
    }

    QValues forward(const Input& input) const {
        Vector a = input;
        for (const auto& layer : layers_) {
            Vector z = layer.weights * a + layer.bias;
            a = layer.activation == Activation::ReLU ? Vector(z.cwiseMax(Scalar(0))) : z;
        }
        return a;
    }

    /// Column-batched forward: inputs is kInputDim x B, result is kOutputDim x B.
    Matrix forward_batch(const Matrix& inputs) const {
        Matrix a = inputs;
        for (const auto& layer : layers_) {
            Matrix z = (layer.weights * a).colwise() + layer.bias;
            a = layer.activation == Activation::ReLU ? Matrix(z.cwiseMax(Scalar(0))) : std::move(z);
        }
        return a;
    }

    const std::vector<Layer>& layers() const { return layers_; }
    Layer& layer(std::size_t i) { return layers_.at(i); }
    const Layer& layer(std::size_t i) const { return layers_.at(i); }
    std::size_t depth() const { return layers_.size(); }

    /// Widths from input to output, e.g. {4, 24, 24, 2}.
    std::vector<int> architecture() const {
        std::vector<int> dims;
        if (layers_.empty()) return dims;
        dims.push_back(static_cast<int>(layers_.front().inputs()));
        for (const auto& layer : layers_) dims.push_back(static_cast<int>(layer.outputs()));
        return dims;
    }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& layer : layers_) n += layer.weights.size() + layer.bias.size();
        return n;
    }

    bool all_finite() const {
        for (const auto& layer : layers_)
            if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
        return true;
    }

    template <typename Other>
    QNetwork<Other> cast() const {
        std::vector<DenseLayer<Other>> out;
        for (const auto& layer : layers_)
            out.push_back({layer.weights.template cast<Other>(), layer.bias.template cast<Other>(),
                           layer.activation});
        return QNetwork<Other>(std::move(out));
    }

private:
    static std::vector<int> chain(std::span<const int> hidden_sizes) {
        if (hidden_sizes.empty()) throw std::invalid_argument("qnet: hidden_sizes must be non-empty");
        std::vector<int> dims{static_cast<int>(kInputDim)};
        for (int h : hidden_sizes) {
            if (h <= 0) throw std::invalid_argument("qnet: hidden sizes must be positive");
            dims.push_back(h);
        }
        dims.push_back(static_cast<int>(kOutputDim));
        return dims;
    }

    void check_shape() const {
        if (layers_.empty()) throw std::invalid_argument("qnet: network needs at least one layer");
        Eigen::Index width = kInputDim;
        for (std::size_t l = 0; l < layers_.size(); ++l) {
            const auto& layer = layers_[l];
            if (layer.inputs() != width || layer.bias.size() != layer.outputs())
                throw std::invalid_argument("qnet: layer " + std::to_string(l) + " does not chain");
            const bool last = l + 1 == layers_.size();
            if (last != (layer.activation == Activation::Linear))
                throw std::invalid_argument("qnet: hidden layers must be ReLU and the output linear");
            width = layer.outputs();
        }
        if (width != kOutputDim) throw std::invalid_argument("qnet: output width must be 2");
    }

    std::vector<Layer> layers_;
};

template <typename Scalar>
Eigen::Matrix<Scalar, 4, 1> to_input(const CartState& s) {
    return s.vector().template cast<Scalar>();
}

/// Q(s, .) for both actions. Throws NumericalError on a non-finite state.
template <typename Scalar>
typename QNetwork<Scalar>::QValues q_values(const QNetwork<Scalar>& net, const CartState& s) {
    if (!s.is_finite()) throw NumericalError("qnet: forward on a non-finite state");
    return net.forward(to_input<Scalar>(s));
}

/// Frozen parameter snapshot used for bootstrap targets. Only replaced wholesale.
template <typename Scalar>
class TargetNetwork {
public:
    TargetNetwork() = default;
    explicit TargetNetwork(QNetwork<Scalar> snapshot) : net_(std::move(snapshot)) {}

    typename QNetwork<Scalar>::QValues forward(const CartState& s) const { return q_values(net_, s); }
    typename QNetwork<Scalar>::Matrix forward_batch(const typename QNetwork<Scalar>::Matrix& in) const {
        return net_.forward_batch(in);
    }
    const QNetwork<Scalar>& network() const { return net_; }

private:
    QNetwork<Scalar> net_;
};

template <typename Scalar>
TargetNetwork<Scalar> sync_target(const QNetwork<Scalar>& net) {
    return TargetNetwork<Scalar>(net);
}

/// y = r for terminal transitions, else r + gamma * max_a' Q_target(s', a').
template <typename Scalar>
Scalar bellman_target(Scalar reward, const CartState& next_state, bool terminal,
                      const TargetNetwork<Scalar>& target, Scalar gamma) {
    if (terminal) return reward;
    return reward + gamma * target.forward(next_state).maxCoeff();
}

template <typename Scalar>
struct LayerGradient {
    typename DenseLayer<Scalar>::Matrix weights;
    typename DenseLayer<Scalar>::Vector bias;
};

/// dLoss/dParameters, one entry per network layer.
template <typename Scalar>
struct GradientSet {
    std::vector<LayerGradient<Scalar>> layers;

    static GradientSet zeros_like(const QNetwork<Scalar>& net) {
        GradientSet g;
        for (const auto& layer : net.layers())
            g.layers.push_back({DenseLayer<Scalar>::Matrix::Zero(layer.outputs(), layer.inputs()),
                                DenseLayer<Scalar>::Vector::Zero(layer.outputs())});
        return g;
    }

    bool congruent_with(const QNetwork<Scalar>& net) const {
        if (layers.size() != net.depth()) return false;
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto& p = net.layer(l);
            if (layers[l].weights.rows() != p.weights.rows() ||
                layers[l].weights.cols() != p.weights.cols() || layers[l].bias.size() != p.bias.size())
                return false;
        }
        return true;
    }

    Scalar squared_norm() const {
        Scalar n = 0;
        for (const auto& g : layers) n += g.weights.squaredNorm() + g.bias.squaredNorm();
        return n;
    }

    void scale(Scalar c) {
        for (auto& g : layers) {
            g.weights *= c;
            g.bias *= c;
        }
    }
};

/// One regression example for the Bellman loss: the target y is a constant.
struct BellmanSample {
    CartState state;
    Action action = Action::PushLeft;
    double target = 0.0;
};

template <typename Scalar>
struct LossAndGradients {
    Scalar loss;
    GradientSet<Scalar> gradients;
};

/// Mean squared Bellman error over the batch, (1/B) sum (y - Q(s, a))^2, and its exact
/// gradient. Only the taken action's output receives gradient.
template <typename Scalar>
LossAndGradients<Scalar> loss_and_gradients(const QNetwork<Scalar>& net,
                                            std::span<const BellmanSample> batch) {
    using Matrix = typename QNetwork<Scalar>::Matrix;
    if (batch.empty()) throw std::invalid_argument("qnet: loss over an empty batch");
    const auto n = static_cast<Eigen::Index>(batch.size());

    Matrix inputs(QNetwork<Scalar>::kInputDim, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& sample = batch[static_cast<std::size_t>(j)];
        if (!sample.state.is_finite() || !std::isfinite(sample.target))
            throw NumericalError("qnet: non-finite sample in batch");
        inputs.col(j) = to_input<Scalar>(sample.state);
    }

    // activations[l] is the input to layer l; pre_activations[l] its affine output.
    const auto& layers = net.layers();
    std::vector<Matrix> activations{inputs};
    std::vector<Matrix> pre_activations;
    for (const auto& layer : layers) {
        Matrix z = (layer.weights * activations.back()).colwise() + layer.bias;
        activations.push_back(layer.activation == Activation::ReLU ? Matrix(z.cwiseMax(Scalar(0))) : z);
        pre_activations.push_back(std::move(z));
    }

    const Matrix& q = activations.back();
    Matrix delta = Matrix::Zero(q.rows(), n);
    Scalar loss = 0;
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& sample = batch[static_cast<std::size_t>(j)];
        const int a = index_of(sample.action);
        const Scalar diff = q(a, j) - static_cast<Scalar>(sample.target);
        loss += diff * diff;
        delta(a, j) = Scalar(2) * diff * inv_n;
    }
    loss *= inv_n;

    GradientSet<Scalar> grads;
    grads.layers.resize(layers.size());
    for (std::size_t l = layers.size(); l-- > 0;) {
        grads.layers[l].weights = delta * activations[l].transpose();
        grads.layers[l].bias = delta.rowwise().sum();
        if (l > 0) {
            Matrix back = layers[l].weights.transpose() * delta;
            const Matrix& z = pre_activations[l - 1];
            delta = back.cwiseProduct(
                z.unaryExpr([](Scalar v) { return v > Scalar(0) ? Scalar(1) : Scalar(0); }));
        }
    }
    return {loss, std::move(grads)};
}

}  // namespace aqil
