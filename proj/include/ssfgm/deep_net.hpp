#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssfgm/network.hpp"

namespace ssfgm {

struct DeepNetShape {
  std::size_t input = 0;
  std::size_t hidden1 = 200;
  std::size_t hidden2 = 100;
  std::size_t categories = 0;
};

struct SgdOptions {
  double learning_rate = 0.01;
  int epochs = 100;
  std::size_t minibatch = 32;
  std::uint64_t seed = 1;
};

/// Two fully connected ReLU layers, h1 = relu(W1 x + b1), h2 = relu(W2 h1 +
/// b2), topped by a wide-and-deep softmax head whose logits are
/// head_alpha x + head_beta h2.
class DeepNet {
 public:
  DeepNet() = default;
  /// All weights zero.
  explicit DeepNet(const DeepNetShape& shape);
  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
  static DeepNet initialized(const DeepNetShape& shape, std::uint64_t seed);

  struct Activations {
    Eigen::VectorXd h1;
    Eigen::VectorXd h2;
  };

  DeepNetShape shape() const;
  Activations forward(std::span<const double> x) const;
  /// Softmax output of the head.
  Eigen::VectorXd predict_proba(std::span<const double> x) const;
  CategoryId predict(std::span<const double> x) const;

  /// Squared loss sum_i ||softmax(z_i) - onehot(y_i)||^2 over the given rows.
  double squared_loss(const Matrix& inputs, std::span<const CategoryId> targets) const;
  /// Gradient of squared_loss with respect to every weight, packed in a
  /// net of the same shape.
  DeepNet loss_gradient(const Matrix& inputs, std::span<const CategoryId> targets) const;

  /// All weights in the fixed order W1, b1, W2, b2, head_alpha, head_beta.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> values);

  Eigen::MatrixXd w1, w2, head_alpha, head_beta;
  Eigen::VectorXd b1, b2;

  friend bool operator==(const DeepNet& a, const DeepNet& b) { return a.flatten() == b.flatten(); }
};

/// Fits the network and the head by minibatch SGD on the training labels
/// (squared loss on the softmax output). Returns the weights of the epoch
/// with the best validation accuracy.
DeepNet train_wide_deep(const Network& net, std::span<const NodeId> train,
                        std::span<const NodeId> validation, const DeepNetShape& shape,
                        const SgdOptions& sgd);

/// N x H2 matrix whose row v is forward(x_v).h2.
Matrix embed_all(const DeepNet& deep, const Network& net);

void to_json(nlohmann::json& j, const DeepNet& deep);
void from_json(const nlohmann::json& j, DeepNet& deep);

}  // namespace ssfgm
