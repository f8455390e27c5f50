#include "ssfgm/deep_net.hpp"

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ssfgm/error.hpp"
#include "ssfgm/rng.hpp"

namespace ssfgm {

namespace {

using Eigen::Index;

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Index>(x.size())};
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  Eigen::VectorXd p = (z.array() - z.maxCoeff()).exp();
  return p / p.sum();
}

void fill_uniform(Eigen::MatrixXd& m, double bound, CounterRng& rng) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = (2.0 * rng.uniform01() - 1.0) * bound;
}

// Per-sample backprop accumulated into `grad` (same shape as the net).
void accumulate_gradient(const DeepNet& net, std::span<const double> x, CategoryId y,
                         DeepNet& grad) {
  const auto xv = as_vector(x);
  const Eigen::VectorXd a1 = net.w1 * xv + net.b1;
  const Eigen::VectorXd h1 = a1.cwiseMax(0.0);
  const Eigen::VectorXd a2 = net.w2 * h1 + net.b2;
  const Eigen::VectorXd h2 = a2.cwiseMax(0.0);
  const Eigen::VectorXd p = softmax(net.head_alpha * xv + net.head_beta * h2);

  Eigen::VectorXd dp = 2.0 * p;
  dp(y) -= 2.0;
  const Eigen::VectorXd dz = p.cwiseProduct(dp.array().matrix() - Eigen::VectorXd::Constant(p.size(), p.dot(dp)));

  grad.head_alpha.noalias() += dz * xv.transpose();
  grad.head_beta.noalias() += dz * h2.transpose();
  const Eigen::VectorXd da2 =
      (net.head_beta.transpose() * dz).cwiseProduct((a2.array() > 0.0).cast<double>().matrix());
  grad.w2.noalias() += da2 * h1.transpose();
  grad.b2 += da2;
  const Eigen::VectorXd da1 =
      (net.w2.transpose() * da2).cwiseProduct((a1.array() > 0.0).cast<double>().matrix());
  grad.w1.noalias() += da1 * xv.transpose();
  grad.b1 += da1;
}

double validation_accuracy(const DeepNet& deep, const Network& net,
                           std::span<const NodeId> nodes) {
  if (nodes.empty()) return 0.0;
  std::size_t hits = 0;
  for (NodeId v : nodes) hits += deep.predict(net.features(v)) == net.label(v) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

}  // namespace

DeepNet::DeepNet(const DeepNetShape& s)
    : w1(Eigen::MatrixXd::Zero(static_cast<Index>(s.hidden1), static_cast<Index>(s.input))),
      w2(Eigen::MatrixXd::Zero(static_cast<Index>(s.hidden2), static_cast<Index>(s.hidden1))),
      head_alpha(Eigen::MatrixXd::Zero(static_cast<Index>(s.categories), static_cast<Index>(s.input))),
      head_beta(Eigen::MatrixXd::Zero(static_cast<Index>(s.categories), static_cast<Index>(s.hidden2))),
      b1(Eigen::VectorXd::Zero(static_cast<Index>(s.hidden1))),
      b2(Eigen::VectorXd::Zero(static_cast<Index>(s.hidden2))) {}

DeepNet DeepNet::initialized(const DeepNetShape& s, std::uint64_t seed) {
  DeepNet net(s);
  CounterRng rng(seed);
  auto bound = [](std::size_t fan_in) { return 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1))); };
  fill_uniform(net.w1, bound(s.input), rng);
  fill_uniform(net.w2, bound(s.hidden1), rng);
  fill_uniform(net.head_alpha, bound(s.input + s.hidden2), rng);
  fill_uniform(net.head_beta, bound(s.input + s.hidden2), rng);
  return net;
}

DeepNetShape DeepNet::shape() const {
  return {static_cast<std::size_t>(w1.cols()), static_cast<std::size_t>(w1.rows()),
          static_cast<std::size_t>(w2.rows()), static_cast<std::size_t>(head_alpha.rows())};
}

DeepNet::Activations DeepNet::forward(std::span<const double> x) const {
  if (static_cast<Index>(x.size()) != w1.cols())
    throw Error(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                                  " features, network expects " +
                                                  std::to_string(w1.cols()));
  Activations act;
  act.h1 = (w1 * as_vector(x) + b1).cwiseMax(0.0);
  act.h2 = (w2 * act.h1 + b2).cwiseMax(0.0);
  return act;
}

Eigen::VectorXd DeepNet::predict_proba(std::span<const double> x) const {
  const auto act = forward(x);
  return softmax(head_alpha * as_vector(x) + head_beta * act.h2);
}

CategoryId DeepNet::predict(std::span<const double> x) const {
  Index best = 0;
  predict_proba(x).maxCoeff(&best);
  return static_cast<CategoryId>(best);
}

double DeepNet::squared_loss(const Matrix& inputs, std::span<const CategoryId> targets) const {
  double loss = 0.0;
  for (Index i = 0; i < inputs.rows(); ++i) {
    Eigen::VectorXd p = predict_proba({inputs.row(i).data(), static_cast<std::size_t>(inputs.cols())});
    p(targets[static_cast<std::size_t>(i)]) -= 1.0;
    loss += p.squaredNorm();
  }
  return loss;
}

DeepNet DeepNet::loss_gradient(const Matrix& inputs, std::span<const CategoryId> targets) const {
  DeepNet grad(shape());
  for (Index i = 0; i < inputs.rows(); ++i)
    accumulate_gradient(*this, {inputs.row(i).data(), static_cast<std::size_t>(inputs.cols())},
                        targets[static_cast<std::size_t>(i)], grad);
  return grad;
}

std::vector<double> DeepNet::flatten() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size() +
                                       head_alpha.size() + head_beta.size()));
  auto push = [&out](const auto& m) {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  };
  push(w1);
  push(b1);
  push(w2);
  push(b2);
  push(head_alpha);
  push(head_beta);
  return out;
}

void DeepNet::unflatten(std::span<const double> values) {
  std::size_t pos = 0;
  auto pull = [&](auto& m) {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) {
        if (pos >= values.size()) throw Error(ErrorCode::DimensionMismatch, "too few weights");
        m(i, j) = values[pos++];
      }
  };
  pull(w1);
  pull(b1);
  pull(w2);
  pull(b2);
  pull(head_alpha);
  pull(head_beta);
  if (pos != values.size()) throw Error(ErrorCode::DimensionMismatch, "too many weights");
}

DeepNet train_wide_deep(const Network& net, std::span<const NodeId> train,
                        std::span<const NodeId> validation, const DeepNetShape& requested,
                        const SgdOptions& sgd) {
  if (train.empty()) throw Error(ErrorCode::NoTrainingLabels, "wide-and-deep training set is empty");
  DeepNetShape shape = requested;
  shape.input = net.feature_dim();
  shape.categories = net.num_categories();

  DeepNet model = DeepNet::initialized(shape, sgd.seed);
  DeepNet best = model;
  double best_acc = validation_accuracy(model, net, validation);

  std::vector<NodeId> order(train.begin(), train.end());
  const CounterRng base(sgd.seed);
  const std::size_t batch = std::max<std::size_t>(sgd.minibatch, 1);
  for (int epoch = 0; epoch < sgd.epochs; ++epoch) {
    auto rng = base.split(static_cast<std::uint64_t>(epoch) + 1);
    rng.shuffle(std::span<NodeId>(order));
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      DeepNet grad(shape);
      for (std::size_t i = start; i < end; ++i)
        accumulate_gradient(model, net.features(order[i]), net.label(order[i]), grad);
      const double step = sgd.learning_rate / static_cast<double>(end - start);
      model.w1 -= step * grad.w1;
      model.b1 -= step * grad.b1;
      model.w2 -= step * grad.w2;
      model.b2 -= step * grad.b2;
      model.head_alpha -= step * grad.head_alpha;
      model.head_beta -= step * grad.head_beta;
    }
    const double acc = validation_accuracy(model, net, validation);
    if (validation.empty() || acc > best_acc) {
      best_acc = acc;
      best = model;
    }
  }
  return best;
}

Matrix embed_all(const DeepNet& deep, const Network& net) {
  const auto h2 = deep.shape().hidden2;
  Matrix out(static_cast<Index>(net.num_nodes()), static_cast<Index>(h2));
  for (NodeId v = 0; v < net.num_nodes(); ++v) out.row(v) = deep.forward(net.features(v)).h2.transpose();
  return out;
}

void to_json(nlohmann::json& j, const DeepNet& deep) {
  const auto s = deep.shape();
  const auto w = deep.flatten();
  for (double x : w)
    if (!std::isfinite(x)) throw Error(ErrorCode::NumericFailure, "non-finite deep-net weight");
  j = nlohmann::json{{"input", s.input},
                     {"hidden1", s.hidden1},
                     {"hidden2", s.hidden2},
                     {"categories", s.categories},
                     {"weights", w}};
}

void from_json(const nlohmann::json& j, DeepNet& deep) {
  DeepNetShape s{j.at("input").get<std::size_t>(), j.at("hidden1").get<std::size_t>(),
                 j.at("hidden2").get<std::size_t>(), j.at("categories").get<std::size_t>()};
  DeepNet out(s);
  out.unflatten(j.at("weights").get<std::vector<double>>());
  deep = std::move(out);
}

}  // namespace ssfgm
