#pragma once

#include <span>

#include "ssfgm/network.hpp"
#include "ssfgm/params.hpp"

namespace ssfgm {

/// The factor graph over a network: attribute factors exp(alpha_y . x),
/// deep factors exp(beta_y . h2(x)) over a frozen per-node embedding, and
/// correlation factors exp(gamma_{y_src, y_dst}) per edge. Everything is
/// evaluated in the log domain.
///
/// Holds a reference to the network; the network must outlive the model.
class FactorModel {
 public:
  /// `hidden` is the N x H2 matrix of cached deep embeddings; pass an
  /// N x 0 matrix (the default) to disable the deep factor.
  explicit FactorModel(const Network& net);
  FactorModel(const Network& net, Matrix hidden);

  const Network& network() const { return *net_; }
  const ModelShape& shape() const { return shape_; }
  std::size_t num_nodes() const { return net_->num_nodes(); }
  CategoryId num_categories() const { return static_cast<CategoryId>(shape_.categories); }
  bool has_deep() const { return shape_.hidden > 0; }

  std::span<const double> hidden(NodeId v) const {
    return {hidden_.data() + static_cast<std::ptrdiff_t>(v) * hidden_.cols(), shape_.hidden};
  }
  const Matrix& hidden() const { return hidden_; }

  /// Throws DimensionMismatch unless `theta` was shaped for this model.
  void check_shape(const ParameterVector& theta) const;

  double log_attribute_factor(const ParameterVector& theta, NodeId v, CategoryId k) const;
  double log_deep_factor(const ParameterVector& theta, NodeId v, CategoryId k) const;
  static double log_correlation_factor(const ParameterVector& theta, EdgeKind kind,
                                       CategoryId src_cat, CategoryId dst_cat) {
    return theta.gamma(kind, src_cat, dst_cat);
  }
  double log_unary(const ParameterVector& theta, NodeId v, CategoryId k) const {
    return log_attribute_factor(theta, v, k) + log_deep_factor(theta, v, k);
  }

  /// log of the unnormalized joint, theta . S(Y); each edge counted once.
  double log_potential(const ParameterVector& theta, const LabelConfiguration& config) const;

  /// Every factor touching node v with v set to k and the rest of `config`
  /// as given: theta . s_hat(y_v = k).
  double conditional_score(const ParameterVector& theta, const LabelConfiguration& config,
                           NodeId v, CategoryId k) const;

  /// log_potential(Y with y_v = k) - log_potential(Y), in O(D + H2 + deg v).
  double delta_log_potential(const ParameterVector& theta, const LabelConfiguration& config,
                             NodeId v, CategoryId k) const {
    const CategoryId old = config[v];
    if (old == k) return 0.0;
    return conditional_score(theta, config, v, k) - conditional_score(theta, config, v, old);
  }

  /// s(y_v): Phi and Psi in the y_v slot plus 1/2 of each incident edge's
  /// Omega cell.
  SufficientStatistics local_statistics(const LabelConfiguration& config, NodeId v) const;
  /// s_hat(y_v = k): as above with full (not halved) Omega increments.
  SufficientStatistics softmax_local_statistics(const LabelConfiguration& config, NodeId v,
                                                CategoryId k) const;
  /// S(Y) = sum_v s(y_v).
  SufficientStatistics global_statistics(const LabelConfiguration& config) const;

  /// In-place forms used on hot paths: out += weight * s(y_v) (resp. s_hat).
  void accumulate_local(SufficientStatistics& out, const LabelConfiguration& config, NodeId v,
                        double weight) const;
  void accumulate_softmax_local(SufficientStatistics& out, const LabelConfiguration& config,
                                NodeId v, CategoryId k, double weight) const;

  /// Adds weight * (Phi, Psi) of node v at category k.
  void accumulate_unary(SufficientStatistics& out, NodeId v, CategoryId k, double weight) const;

 private:
  const Network* net_;
  Matrix hidden_;
  ModelShape shape_;
};

}  // namespace ssfgm
