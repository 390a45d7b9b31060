#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "aqil/qnet.hpp"

namespace aqil {

enum class ParamKind { Weight, Bias };

template <typename Scalar>
struct WeightRecord {
    int layer;
    ParamKind kind;
    int row;
    int col;  // always 0 for biases
    Scalar value;
};

/// Flat enumeration of every parameter: per layer, weights row-major then biases.
template <typename Scalar>
std::vector<WeightRecord<Scalar>> export_weights(const QNetwork<Scalar>& net) {
    std::vector<WeightRecord<Scalar>> out;
    out.reserve(net.parameter_count());
    for (std::size_t l = 0; l < net.depth(); ++l) {
        const auto& layer = net.layer(l);
        const int li = static_cast<int>(l);
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                out.push_back({li, ParamKind::Weight, static_cast<int>(r), static_cast<int>(c),
                               layer.weights(r, c)});
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r)
            out.push_back({li, ParamKind::Bias, static_cast<int>(r), 0, layer.bias(r)});
    }
    return out;
}

/// Inverse of export_weights. `architecture` lists widths input..output, e.g. {4, 24, 24, 2};
/// every parameter must be given exactly once.
template <typename Scalar>
QNetwork<Scalar> import_weights(std::span<const int> architecture,
                                std::span<const WeightRecord<Scalar>> records) {
    if (architecture.size() < 3 || architecture.front() != 4 || architecture.back() != 2)
        throw std::invalid_argument("import_weights: architecture must run 4 -> ... -> 2");
    QNetwork<Scalar> net = QNetwork<Scalar>::zeros(architecture.subspan(1, architecture.size() - 2));
    if (records.size() != net.parameter_count())
        throw std::invalid_argument("import_weights: record count does not match architecture");

    std::vector<std::vector<char>> seen(net.depth());
    for (std::size_t l = 0; l < net.depth(); ++l) seen[l].assign(net.layer(l).weights.size() + net.layer(l).bias.size(), 0);

    for (const auto& rec : records) {
        if (rec.layer < 0 || static_cast<std::size_t>(rec.layer) >= net.depth())
            throw std::invalid_argument("import_weights: layer index out of range");
        auto& layer = net.layer(static_cast<std::size_t>(rec.layer));
        std::size_t slot = 0;
        if (rec.kind == ParamKind::Weight) {
            if (rec.row < 0 || rec.row >= layer.weights.rows() || rec.col < 0 || rec.col >= layer.weights.cols())
                throw std::invalid_argument("import_weights: weight index out of range");
            layer.weights(rec.row, rec.col) = rec.value;
            slot = static_cast<std::size_t>(rec.row * layer.weights.cols() + rec.col);
        } else {
            if (rec.row < 0 || rec.row >= layer.bias.size() || rec.col != 0)
                throw std::invalid_argument("import_weights: bias index out of range");
            layer.bias(rec.row) = rec.value;
            slot = static_cast<std::size_t>(layer.weights.size() + rec.row);
        }
        auto& mark = seen[static_cast<std::size_t>(rec.layer)][slot];
        if (mark) throw std::invalid_argument("import_weights: duplicate parameter record");
        mark = 1;
    }
    return net;
}

/// Text format: "# architecture 4,24,24,2", a "layer,kind,row,col,value" header,
/// then one record per line with shortest round-trip decimals.
void write_weights(std::ostream& out, const QNetwork<double>& net);
void write_weights(const std::filesystem::path& path, const QNetwork<double>& net);
QNetwork<double> read_weights(std::istream& in);
QNetwork<double> read_weights(const std::filesystem::path& path);

}  // namespace aqil
