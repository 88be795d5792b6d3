#include "sparseproj/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "sparseproj/errors.hpp"

namespace sparseproj {

namespace {

Matrix activate(Activation a, const Matrix& z) {
    switch (a) {
        case Activation::Relu:
            return z.cwiseMax(0.0);
        case Activation::Sigmoid:
            return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
        case Activation::Linear:
            break;
    }
    return z;
}

// d activation / d pre, given pre and post values.
Matrix activation_slope(Activation a, const Matrix& pre, const Matrix& post) {
    switch (a) {
        case Activation::Relu:
            return pre.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
        case Activation::Sigmoid:
            return post.cwiseProduct((1.0 - post.array()).matrix());
        case Activation::Linear:
            break;
    }
    return Matrix::Ones(pre.rows(), pre.cols());
}

std::vector<Vector> layer_vectors(const Matrix& w, Grouping grouping) {
    std::vector<Vector> out;
    if (grouping == Grouping::Rows) {
        for (Eigen::Index i = 0; i < w.rows(); ++i) {
            out.emplace_back(w.row(i).transpose());
        }
    } else {
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            out.emplace_back(w.col(j));
        }
    }
    return out;
}

struct AdamState {
    std::vector<Matrix> mw, vw;
    std::vector<Vector> mb, vb;
    long t = 0;
};

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

}  // namespace

Network Network::create(std::span<const int> widths, Activation hidden, Activation output,
                        Rng& rng) {
    if (widths.size() < 2) {
        throw DomainError("Network: need at least input and output widths");
    }
    Network net;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const int in = widths[l];
        const int out = widths[l + 1];
        if (in < 1 || out < 1) {
            throw DomainError("Network: layer widths must be positive");
        }
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        Layer layer;
        layer.weights.resize(out, in);
        for (Eigen::Index j = 0; j < in; ++j) {
            for (Eigen::Index i = 0; i < out; ++i) {
                layer.weights(i, j) = rng.uniform(-bound, bound);
            }
        }
        layer.bias = Vector::Zero(out);
        layer.activation = (l + 2 == widths.size()) ? output : hidden;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

void Network::validate() const {
    if (layers.empty()) {
        throw DomainError("Network: no layers");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const Layer& layer = layers[l];
        if (layer.bias.size() != layer.weights.rows()) {
            throw DomainError("Network: bias size mismatch in layer " + std::to_string(l));
        }
        if (l > 0 && layer.weights.cols() != layers[l - 1].weights.rows()) {
            throw DomainError("Network: layer " + std::to_string(l) + " does not chain");
        }
        require_finite(layer.weights, "Network weights");
        require_finite(layer.bias, "Network bias");
    }
}

ForwardPass forward(const Network& net, const Matrix& batch) {
    if (net.layers.empty() || batch.rows() != net.input_dim()) {
        throw DomainError("forward: input width does not match the first layer");
    }
    ForwardPass pass;
    pass.inputs.push_back(batch);
    for (const Layer& layer : net.layers) {
        Matrix z = layer.weights * pass.inputs.back();
        z.colwise() += layer.bias;
        pass.inputs.push_back(activate(layer.activation, z));
        pass.pre.push_back(std::move(z));
    }
    return pass;
}

Gradients backward(const Network& net, const ForwardPass& pass, const Matrix& loss_grad) {
    const std::size_t depth = net.layers.size();
    if (pass.pre.size() != depth || loss_grad.rows() != pass.output().rows() ||
        loss_grad.cols() != pass.output().cols()) {
        throw DomainError("backward: activations do not match the network");
    }
    Gradients grads;
    grads.weights.resize(depth);
    grads.bias.resize(depth);
    Matrix delta = loss_grad;  // d loss / d layer output
    for (std::size_t l = depth; l-- > 0;) {
        const Layer& layer = net.layers[l];
        delta = delta.cwiseProduct(activation_slope(layer.activation, pass.pre[l], pass.inputs[l + 1]));
        grads.weights[l] = delta * pass.inputs[l].transpose();
        grads.bias[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = layer.weights.transpose() * delta;
        }
    }
    return grads;
}

LossValue compute_loss(Loss loss, const Matrix& output, const Matrix& target) {
    if (output.rows() != target.rows() || output.cols() != target.cols()) {
        throw DomainError("compute_loss: output/target shape mismatch");
    }
    const double batch = static_cast<double>(output.cols());
    LossValue out;
    if (loss == Loss::MeanSquared) {
        const Matrix diff = output - target;
        out.value = 0.5 * diff.squaredNorm() / batch;
        out.grad = diff / batch;
        return out;
    }
    Matrix prob(output.rows(), output.cols());
    double total = 0.0;
    for (Eigen::Index j = 0; j < output.cols(); ++j) {
        const double shift = output.col(j).maxCoeff();
        Vector e = (output.col(j).array() - shift).exp();
        const double z = e.sum();
        prob.col(j) = e / z;
        // -sum_k t_k log softmax_k
        total -= target.col(j).dot((output.col(j).array() - shift - std::log(z)).matrix());
    }
    out.value = total / batch;
    out.grad = (prob - target) / batch;
    return out;
}

Matrix Dataset::targets(Eigen::Index classes) const {
    if (!labels) {
        return features;
    }
    Matrix t = Matrix::Zero(classes, size());
    for (Eigen::Index j = 0; j < size(); ++j) {
        const int c = (*labels)[static_cast<std::size_t>(j)];
        if (c < 0 || c >= classes) {
            throw DomainError("label " + std::to_string(c) + " outside the output range");
        }
        t(c, j) = 1.0;
    }
    return t;
}

Dataset dataset_from_matrix(const Matrix& rows, bool labelled) {
    require_finite(rows, "dataset");
    Dataset d;
    if (!labelled) {
        d.features = rows.transpose();
        return d;
    }
    if (rows.cols() < 2) {
        throw DomainError("dataset: labelled data needs a feature column and a label column");
    }
    d.features = rows.leftCols(rows.cols() - 1).transpose();
    std::vector<int> labels;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        const double v = rows(i, rows.cols() - 1);
        if (v != std::floor(v) || v < 0) {
            throw DomainError("dataset: label in row " + std::to_string(i + 1) +
                              " is not a nonnegative integer");
        }
        labels.push_back(static_cast<int>(v));
    }
    d.labels = std::move(labels);
    return d;
}

void TrainConfig::validate() const {
    if (epochs < 1 || batch_size < 1) {
        throw ConfigError("training: epochs and batch size must be positive");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("training: learning rate must be > 0");
    }
    if (projection.enabled) {
        if (!(projection.s >= 0.0 && projection.s <= 1.0)) {
            throw ConfigError("training: projection target must lie in [0, 1]");
        }
        if (projection.period < 1) {
            throw ConfigError("training: projection period must be >= 1");
        }
    }
}

Evaluation evaluate(const Network& net, const Dataset& data, Loss loss) {
    const ForwardPass pass = forward(net, data.features);
    const Matrix& out = pass.output();
    Evaluation ev;
    ev.loss = compute_loss(loss, out, data.targets(out.rows())).value;
    ev.accuracy = std::numeric_limits<double>::quiet_NaN();
    if (data.labels) {
        Eigen::Index correct = 0;
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            Eigen::Index predicted = 0;
            out.col(j).maxCoeff(&predicted);
            correct += predicted == (*data.labels)[static_cast<std::size_t>(j)];
        }
        ev.accuracy = static_cast<double>(correct) / static_cast<double>(out.cols());
    }
    return ev;
}

double layer_sparsity(const Network& net, std::size_t layer, Grouping grouping) {
    if (layer >= net.layers.size()) {
        throw DomainError("layer index out of range");
    }
    double total = 0.0;
    int count = 0;
    for (const Vector& v : layer_vectors(net.layers[layer].weights, grouping)) {
        if (v.size() >= 2 && v.cwiseAbs().maxCoeff() > 0.0) {
            total += spar(v);
            ++count;
        }
    }
    return count > 0 ? total / count : 1.0;
}

ProjectionResult project_layer(Network& net, const ProjectionSchedule& schedule) {
    if (schedule.layer >= net.layers.size()) {
        throw DomainError("projection layer index " + std::to_string(schedule.layer) +
                          " out of range");
    }
    Matrix& w = net.layers[schedule.layer].weights;
    const auto all = layer_vectors(w, schedule.grouping);
    std::vector<Vector> members;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].cwiseAbs().maxCoeff() > 0.0) {
            members.push_back(all[i]);
            slots.push_back(i);
        }
    }
    ProjectionConfig cfg;
    cfg.s = schedule.s;
    cfg.epsilon = schedule.epsilon;
    ProjectionResult res = project_group(VectorGroup(std::move(members)), cfg);
    for (std::size_t k = 0; k < slots.size(); ++k) {
        const auto idx = static_cast<Eigen::Index>(slots[k]);
        if (schedule.grouping == Grouping::Rows) {
            w.row(idx) = res.projected[k].transpose();
        } else {
            w.col(idx) = res.projected[k];
        }
    }
    return res;
}

TrainResult train_with_projection(Network net, const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    net.validate();
    if (cfg.projection.enabled && cfg.projection.layer >= net.layers.size()) {
        throw DomainError("projection layer index " + std::to_string(cfg.projection.layer) +
                          " out of range");
    }
    if (data.size() == 0) {
        throw DomainError("training: empty dataset");
    }
    const Matrix targets = data.targets(net.output_dim());
    if (targets.rows() != net.output_dim()) {
        throw DomainError("training: target width does not match the output layer");
    }

    Rng rng(cfg.seed);
    AdamState adam;
    for (const Layer& layer : net.layers) {
        adam.mw.push_back(Matrix::Zero(layer.weights.rows(), layer.weights.cols()));
        adam.vw.push_back(adam.mw.back());
        adam.mb.push_back(Vector::Zero(layer.bias.size()));
        adam.vb.push_back(adam.mb.back());
    }

    TrainResult result;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    long step = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates with the portable generator.
        for (std::size_t i = order.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.next() % i);
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const auto count = static_cast<Eigen::Index>(stop - start);
            Matrix xb(data.features.rows(), count);
            Matrix tb(targets.rows(), count);
            for (Eigen::Index k = 0; k < count; ++k) {
                const Eigen::Index src = order[start + static_cast<std::size_t>(k)];
                xb.col(k) = data.features.col(src);
                tb.col(k) = targets.col(src);
            }
            const ForwardPass pass = forward(net, xb);
            const LossValue lv = compute_loss(cfg.loss, pass.output(), tb);
            const Gradients g = backward(net, pass, lv.grad);

            ++step;
            if (cfg.optimizer == Optimizer::Sgd) {
                for (std::size_t l = 0; l < net.layers.size(); ++l) {
                    net.layers[l].weights -= cfg.learning_rate * g.weights[l];
                    net.layers[l].bias -= cfg.learning_rate * g.bias[l];
                }
            } else {
                ++adam.t;
                const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(adam.t));
                const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(adam.t));
                auto apply = [&](auto& param, auto& m, auto& v, const auto& grad) {
                    m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * grad;
                    v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * grad.cwiseProduct(grad);
                    param.array() -= cfg.learning_rate * (m.array() / c1) /
                                     ((v.array() / c2).sqrt() + kAdamEps);
                };
                for (std::size_t l = 0; l < net.layers.size(); ++l) {
                    apply(net.layers[l].weights, adam.mw[l], adam.vw[l], g.weights[l]);
                    apply(net.layers[l].bias, adam.mb[l], adam.vb[l], g.bias[l]);
                }
            }

            if (cfg.projection.enabled && step % cfg.projection.period == 0) {
                const ProjectionResult pr = project_layer(net, cfg.projection);
                result.projections.push_back({step, pr.achieved_sparsity, pr.discontinuous, pr.feasible_at_zero});
            }
        }

        const Evaluation ev = evaluate(net, data, cfg.loss);
        const std::size_t tracked = cfg.projection.enabled ? cfg.projection.layer : 0;
        const Grouping grouping = cfg.projection.enabled ? cfg.projection.grouping : Grouping::Rows;
        result.trace.push_back({ev.loss, ev.accuracy, layer_sparsity(net, tracked, grouping)});
    }
    result.net = std::move(net);
    return result;
}

std::optional<Activation> parse_activation(std::string_view name) {
    if (name == "relu") return Activation::Relu;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "linear") return Activation::Linear;
    return std::nullopt;
}

}  // namespace sparseproj
