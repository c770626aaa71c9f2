#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "riccinet/data.hpp"

namespace riccinet::nn {

struct NetworkSpec {
  /// Hidden-layer widths N_1..N_L. The sigmoid output unit is implicit.
  std::vector<std::size_t> layer_widths;
  std::size_t input_dim = 0;
  std::uint64_t seed = 0;
  double learning_rate = 0.001;
  std::size_t epochs = 100;
  std::size_t batch_size = 32;

  // RMSprop internals.
  double rms_decay = 0.9;
  double rms_epsilon = 1e-7;

  std::size_t depth() const { return layer_widths.size(); }
  void validate() const;
};

/// weights[l] maps layer l to layer l+1 (shape N_l x N_{l+1}, with N_0 the
/// input dimension), so a batch with samples in rows propagates as
/// H = X * W + 1 b^T. The last entry is the N_L x 1 output layer.
struct TrainedNetwork {
  NetworkSpec spec;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  double final_train_loss = 0.0;

  std::size_t hidden_layers() const { return weights.empty() ? 0 : weights.size() - 1; }
  void validate() const;
};

/// Post-ReLU outputs of every hidden layer; per_layer[l] has one row per input sample.
struct LayerActivations {
  std::vector<Eigen::MatrixXd> per_layer;
  std::size_t layer_count() const { return per_layer.size(); }
  std::size_t point_count() const {
    return per_layer.empty() ? 0 : static_cast<std::size_t>(per_layer.front().rows());
  }
};

struct ForwardResult {
  Eigen::VectorXd predictions;
  LayerActivations activations;
};

/// Gradient of the mean binary cross-entropy, same shapes as the network.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  double loss = 0.0;
};

enum class WidthClass : std::uint8_t { Narrow, Wide, Bottleneck };
enum class DepthClass : std::uint8_t { Shallow, Deep };

std::string to_string(WidthClass w);
std::string to_string(DepthClass d);
WidthClass parse_width(const std::string& s);
DepthClass parse_depth(const std::string& s);

/// narrow -> 25s, wide -> 50s, bottleneck -> 50 narrowing linearly to 25 at the
/// middle layer and back (intermediate widths rounded down). Shallow has 5
/// hidden layers, deep has 11.
std::vector<std::size_t> make_architecture(WidthClass width, DepthClass depth);

/// Glorot-uniform weights and zero biases, drawn from spec.seed.
TrainedNetwork initialize(const NetworkSpec& spec);

ForwardResult forward(const TrainedNetwork& net, const Eigen::MatrixXd& batch);
Eigen::VectorXd predict(const TrainedNetwork& net, const Eigen::MatrixXd& batch);

/// Mean BCE loss over the batch and its gradient by backpropagation.
Gradients loss_and_gradient(const TrainedNetwork& net, const Eigen::MatrixXd& batch,
                            const Eigen::VectorXd& targets);
double loss(const TrainedNetwork& net, const Eigen::MatrixXd& batch, const Eigen::VectorXd& targets);

/// Mini-batch RMSprop. Throws TrainingDiverged if the loss stops being finite.
TrainedNetwork train(const NetworkSpec& spec, const data::LabeledDataset& train_set);

/// Fraction of rows whose thresholded prediction (>= 0.5 means class b) matches.
double accuracy(const TrainedNetwork& net, const data::LabeledDataset& ds);

std::string to_json(const TrainedNetwork& net);
TrainedNetwork from_json(const std::string& text);
void save(const std::string& path, const TrainedNetwork& net);
TrainedNetwork load(const std::string& path);

}  // namespace riccinet::nn
