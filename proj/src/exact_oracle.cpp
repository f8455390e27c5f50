#include "ssfgm/exact_oracle.hpp"

#include <cmath>
#include <limits>

#include "ssfgm/error.hpp"

namespace ssfgm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Streaming weighted sums: every quantity is stored relative to the largest
// log weight seen so far and rescaled when a new maximum arrives.
struct WeightedSums {
  explicit WeightedSums(const ModelShape& shape, std::size_t n)
      : marginals(Matrix::Zero(static_cast<Eigen::Index>(n),
                               static_cast<Eigen::Index>(shape.categories))),
        stats(shape) {}

  void add(double lp, const LabelConfiguration& config, const SufficientStatistics& s) {
    if (lp > max_lp) {
      if (max_lp != kNegInf) {
        const double scale = std::exp(max_lp - lp);
        total *= scale;
        marginals *= scale;
        stats *= scale;
      }
      max_lp = lp;
      best = config;
      best_lp = lp;
    }
    const double w = std::exp(lp - max_lp);
    total += w;
    for (std::size_t v = 0; v < config.size(); ++v)
      marginals(static_cast<Eigen::Index>(v), config[v]) += w;
    add_weighted(s, w);
  }

  void add_weighted(const SufficientStatistics& s, double w) {
    auto out = stats.flat();
    const auto in = s.flat();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * in[i];
  }

  double log_total() const { return max_lp + std::log(total); }

  void normalize() {
    marginals /= total;
    stats *= 1.0 / total;
  }

  double max_lp = kNegInf;
  double total = 0.0;
  Matrix marginals;
  SufficientStatistics stats;
  LabelConfiguration best;
  double best_lp = kNegInf;
};

bool consistent(const Network& net, const LabelConfiguration& config) {
  for (NodeId v = 0; v < config.size(); ++v)
    if (net.is_labeled(v) && net.label(v) != config[v]) return false;
  return true;
}

}  // namespace

ExactSummary enumerate(const FactorModel& model, const ParameterVector& theta, bool clamp_labels) {
  model.check_shape(theta);
  const auto& net = model.network();
  const std::size_t n = net.num_nodes();
  const CategoryId c = model.num_categories();
  if (c == 0) throw Error(ErrorCode::InvalidArgument, "no categories");
  if (std::pow(static_cast<double>(c), static_cast<double>(n)) > kMaxEnumeratedConfigurations)
    throw Error(ErrorCode::InstanceTooLarge, std::to_string(c) + "^" + std::to_string(n) +
                                                 " configurations exceed the enumeration guard");

  WeightedSums full(model.shape(), n);
  WeightedSums conditional(model.shape(), n);

  LabelConfiguration config(n, 0);
  double lp = model.log_potential(theta, config);
  SufficientStatistics stats = model.global_statistics(config);
  std::size_t visited = 0;
  while (true) {
    full.add(lp, config, stats);
    if (consistent(net, config)) conditional.add(lp, config, stats);
    ++visited;

    // odometer increment: lowest digit first
    std::size_t digit = 0;
    while (digit < n) {
      const auto v = static_cast<NodeId>(digit);
      const CategoryId old = config[v];
      const CategoryId next = old + 1 == c ? 0 : old + 1;
      lp += model.delta_log_potential(theta, config, v, next);
      model.accumulate_softmax_local(stats, config, v, old, -1.0);
      config[v] = next;
      model.accumulate_softmax_local(stats, config, v, next, 1.0);
      if (next != 0) break;
      ++digit;
    }
    if (digit == n) break;
    if (visited % 4096 == 0) {
      lp = model.log_potential(theta, config);
      stats = model.global_statistics(config);
    }
  }

  ExactSummary out;
  out.log_z = full.log_total();
  out.log_z_conditional = conditional.log_total();
  full.normalize();
  conditional.normalize();
  out.expected_stats_model = full.stats;
  out.expected_stats_data = conditional.stats;
  const WeightedSums& chosen = clamp_labels ? conditional : full;
  out.node_marginals = chosen.marginals;
  out.map_config = chosen.best;
  out.map_log_potential = chosen.best_lp;
  return out;
}

SufficientStatistics exact_gradient(const FactorModel& model, const ParameterVector& theta) {
  const auto summary = enumerate(model, theta, true);
  return summary.expected_stats_data - summary.expected_stats_model;
}

double exact_log_likelihood(const FactorModel& model, const ParameterVector& theta) {
  const auto summary = enumerate(model, theta, true);
  return summary.log_z_conditional - summary.log_z;
}

}  // namespace ssfgm
