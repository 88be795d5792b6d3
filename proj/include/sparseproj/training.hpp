#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sparseproj/gsp.hpp"
#include "sparseproj/random.hpp"

namespace sparseproj {

enum class Activation { Linear, Relu, Sigmoid };
enum class Loss { MeanSquared, SoftmaxCrossEntropy };
enum class Optimizer { Sgd, Adam };
/// Which vectors of a weight matrix (out x in) form the projected group.
enum class Grouping { Rows, Columns };

struct Layer {
    Matrix weights;  ///< out x in
    Vector bias;     ///< out
    Activation activation = Activation::Linear;
};

/// Dense feedforward network. Samples are columns.
struct Network {
    std::vector<Layer> layers;

    /// Layer widths {in, h1, ..., out}; weights uniform in +-1/sqrt(fan_in),
    /// zero biases.
    static Network create(std::span<const int> widths, Activation hidden, Activation output,
                          Rng& rng);

    Eigen::Index input_dim() const { return layers.front().weights.cols(); }
    Eigen::Index output_dim() const { return layers.back().weights.rows(); }
    /// Throws DomainError on broken chaining or non-finite parameters.
    void validate() const;
};

/// Everything backward() needs: inputs[l] feeds layer l, pre[l] is its
/// affine output; inputs.back() is the network output.
struct ForwardPass {
    std::vector<Matrix> inputs;
    std::vector<Matrix> pre;

    const Matrix& output() const { return inputs.back(); }
};

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> bias;
};

ForwardPass forward(const Network& net, const Matrix& batch);

/// Backpropagates dLoss/dOutput (same shape as the output).
Gradients backward(const Network& net, const ForwardPass& pass, const Matrix& loss_grad);

struct LossValue {
    double value = 0.0;
    Matrix grad;  ///< d value / d output
};

/// Mean over samples. MeanSquared: 0.5 * ||output - target||^2 per sample;
/// SoftmaxCrossEntropy: targets are one-hot columns, output are logits.
LossValue compute_loss(Loss loss, const Matrix& output, const Matrix& target);

struct Dataset {
    Matrix features;                 ///< d x N
    std::optional<std::vector<int>> labels;

    Eigen::Index size() const { return features.cols(); }
    /// One-hot labels (classes x N), or the features themselves without labels.
    Matrix targets(Eigen::Index classes) const;
};

/// CSV rows are samples; with `labelled`, the last column is an integer class.
Dataset dataset_from_matrix(const Matrix& rows, bool labelled);

struct ProjectionSchedule {
    bool enabled = false;
    std::size_t layer = 0;
    Grouping grouping = Grouping::Rows;
    double s = 0.0;
    int period = 15;        ///< optimizer steps between projections
    double epsilon = 1e-4;
};

struct TrainConfig {
    int epochs = 10;
    int batch_size = 32;
    double learning_rate = 1e-3;
    Optimizer optimizer = Optimizer::Adam;
    Loss loss = Loss::SoftmaxCrossEntropy;
    ProjectionSchedule projection;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochMetrics {
    double loss = 0.0;
    double accuracy = 0.0;  ///< NaN without labels
    double layer_sparsity = 0.0;
};

struct ProjectionEvent {
    long step = 0;
    double achieved_sparsity = 0.0;
    bool discontinuous = false;
    bool feasible_at_zero = false;  ///< layer was already at or above the target; left unchanged
};

struct TrainResult {
    Network net;
    std::vector<EpochMetrics> trace;
    std::vector<ProjectionEvent> projections;
};

struct Evaluation {
    double loss = 0.0;
    double accuracy = 0.0;  ///< NaN without labels
};

Evaluation evaluate(const Network& net, const Dataset& data, Loss loss);

/// Average sparsity of the chosen layer's row or column vectors (zero vectors skipped).
double layer_sparsity(const Network& net, std::size_t layer, Grouping grouping);

/// Replaces the layer's rows/columns by their grouped projection at sparsity s.
/// All-zero vectors are left out of the group.
ProjectionResult project_layer(Network& net, const ProjectionSchedule& schedule);

/// Minibatch training; every `period` optimizer steps the scheduled layer is
/// projected.
TrainResult train_with_projection(Network net, const Dataset& data, const TrainConfig& cfg);

std::optional<Activation> parse_activation(std::string_view name);

}  // namespace sparseproj
