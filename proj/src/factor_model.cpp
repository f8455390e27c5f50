#include "ssfgm/factor_model.hpp"

#include "ssfgm/error.hpp"

namespace ssfgm {

namespace {

double dot_span(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

FactorModel::FactorModel(const Network& net)
    : FactorModel(net, Matrix(static_cast<Eigen::Index>(net.num_nodes()), 0)) {}

FactorModel::FactorModel(const Network& net, Matrix hidden)
    : net_(&net),
      hidden_(std::move(hidden)),
      shape_{net.num_categories(), net.feature_dim(), static_cast<std::size_t>(hidden_.cols())} {
  if (static_cast<std::size_t>(hidden_.rows()) != net.num_nodes())
    throw Error(ErrorCode::DimensionMismatch,
                "deep embedding has " + std::to_string(hidden_.rows()) + " rows for " +
                    std::to_string(net.num_nodes()) + " nodes");
  if (!hidden_.allFinite()) throw Error(ErrorCode::NumericFailure, "non-finite deep embedding");
}

void FactorModel::check_shape(const ParameterVector& theta) const {
  if (!(theta.shape() == shape_))
    throw Error(ErrorCode::DimensionMismatch,
                "parameters shaped (C=" + std::to_string(theta.shape().categories) +
                    ", D=" + std::to_string(theta.shape().features) +
                    ", H2=" + std::to_string(theta.shape().hidden) + ") for model (C=" +
                    std::to_string(shape_.categories) + ", D=" + std::to_string(shape_.features) +
                    ", H2=" + std::to_string(shape_.hidden) + ")");
}

double FactorModel::log_attribute_factor(const ParameterVector& theta, NodeId v,
                                         CategoryId k) const {
  return dot_span(theta.alpha(k), net_->features(v));
}

double FactorModel::log_deep_factor(const ParameterVector& theta, NodeId v, CategoryId k) const {
  if (shape_.hidden == 0) return 0.0;
  return dot_span(theta.beta(k), hidden(v));
}

double FactorModel::log_potential(const ParameterVector& theta,
                                  const LabelConfiguration& config) const {
  double total = 0.0;
  for (NodeId v = 0; v < num_nodes(); ++v) total += log_unary(theta, v, config[v]);
  for (const auto& e : net_->edges()) total += theta.gamma(e.kind, config[e.src], config[e.dst]);
  return total;
}

double FactorModel::conditional_score(const ParameterVector& theta,
                                      const LabelConfiguration& config, NodeId v,
                                      CategoryId k) const {
  double score = log_unary(theta, v, k);
  for (const auto& inc : net_->incident(v)) {
    const CategoryId other = config[inc.neighbor];
    score += inc.outgoing ? theta.gamma(inc.kind, k, other) : theta.gamma(inc.kind, other, k);
  }
  return score;
}

void FactorModel::accumulate_unary(SufficientStatistics& out, NodeId v, CategoryId k,
                                   double weight) const {
  auto a = out.alpha(k);
  const auto x = net_->features(v);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += weight * x[j];
  if (shape_.hidden > 0) {
    auto b = out.beta(k);
    const auto h = hidden(v);
    for (std::size_t j = 0; j < b.size(); ++j) b[j] += weight * h[j];
  }
}

void FactorModel::accumulate_softmax_local(SufficientStatistics& out,
                                           const LabelConfiguration& config, NodeId v,
                                           CategoryId k, double weight) const {
  accumulate_unary(out, v, k, weight);
  for (const auto& inc : net_->incident(v)) {
    const CategoryId other = config[inc.neighbor];
    if (inc.outgoing)
      out.gamma(inc.kind, k, other) += weight;
    else
      out.gamma(inc.kind, other, k) += weight;
  }
}

void FactorModel::accumulate_local(SufficientStatistics& out, const LabelConfiguration& config,
                                   NodeId v, double weight) const {
  accumulate_unary(out, v, config[v], weight);
  const double half = 0.5 * weight;
  for (const auto& inc : net_->incident(v)) {
    const auto& e = net_->edges()[inc.edge];
    out.gamma(e.kind, config[e.src], config[e.dst]) += half;
  }
}

SufficientStatistics FactorModel::local_statistics(const LabelConfiguration& config,
                                                   NodeId v) const {
  SufficientStatistics s(shape_);
  accumulate_local(s, config, v, 1.0);
  return s;
}

SufficientStatistics FactorModel::softmax_local_statistics(const LabelConfiguration& config,
                                                           NodeId v, CategoryId k) const {
  SufficientStatistics s(shape_);
  accumulate_softmax_local(s, config, v, k, 1.0);
  return s;
}

SufficientStatistics FactorModel::global_statistics(const LabelConfiguration& config) const {
  SufficientStatistics s(shape_);
  for (NodeId v = 0; v < num_nodes(); ++v) accumulate_unary(s, v, config[v], 1.0);
  for (const auto& e : net_->edges()) s.gamma(e.kind, config[e.src], config[e.dst]) += 1.0;
  return s;
}

}  // namespace ssfgm
