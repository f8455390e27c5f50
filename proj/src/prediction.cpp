#include "ssfgm/error.hpp"
#include "ssfgm/learning.hpp"
#include "ssfgm/mh.hpp"
#include "ssfgm/rng.hpp"

namespace ssfgm {

namespace {

CategoryId best_unary(const FactorModel& model, const ParameterVector& theta, NodeId v) {
  CategoryId best = 0;
  double best_score = model.log_unary(theta, v, 0);
  for (CategoryId k = 1; k < model.num_categories(); ++k) {
    const double s = model.log_unary(theta, v, k);
    if (s > best_score) {
      best_score = s;
      best = k;
    }
  }
  return best;
}

}  // namespace

LabelConfiguration unary_decode(const FactorModel& model, const ParameterVector& theta) {
  model.check_shape(theta);
  const Network& net = model.network();
  LabelConfiguration config(net.num_nodes(), 0);
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    config[v] = net.is_labeled(v) ? net.label(v) : best_unary(model, theta, v);
  return config;
}

LabelConfiguration icm_decode(const FactorModel& model, const ParameterVector& theta,
                              LabelConfiguration init, std::size_t max_sweeps) {
  model.check_shape(theta);
  const Network& net = model.network();
  if (init.size() != net.num_nodes())
    throw Error(ErrorCode::DimensionMismatch, "configuration length differs from node count");
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    if (net.is_labeled(v)) init[v] = net.label(v);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    bool changed = false;
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (net.is_labeled(v)) continue;
      CategoryId best = init[v];
      double best_score = model.conditional_score(theta, init, v, best);
      for (CategoryId k = 0; k < model.num_categories(); ++k) {
        const double s = model.conditional_score(theta, init, v, k);
        if (s > best_score) {
          best_score = s;
          best = k;
        }
      }
      if (best != init[v]) {
        init[v] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return init;
}

PredictMethod default_predictor(LearnerKind kind) {
  return kind == LearnerKind::LBP ? PredictMethod::MaxSum : PredictMethod::MHSample;
}

LabelConfiguration predict(const FactorModel& model, const ParameterVector& theta,
                           const PredictOptions& options) {
  model.check_shape(theta);
  if (options.method == PredictMethod::MaxSum) return max_sum_decode(model, theta, true, options.lbp);
  const auto init = icm_decode(model, theta, unary_decode(model, theta), options.icm_sweeps);
  const std::uint64_t steps =
      options.steps > 0 ? options.steps : 10 * static_cast<std::uint64_t>(model.num_nodes()) + 1;
  CounterRng rng(options.seed);
  return sample_map(model, theta, init, steps, rng);
}

}  // namespace ssfgm
