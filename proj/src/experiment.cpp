#include "ssfgm/experiment.hpp"

#include <algorithm>
#include <chrono>

#include <spdlog/spdlog.h>

namespace ssfgm {

Network prediction_network(const Network& full, const DatasetSplit& split) {
  std::vector<NodeId> keep = split.train;
  keep.insert(keep.end(), split.validation.begin(), split.validation.end());
  std::sort(keep.begin(), keep.end());
  return full.restrict_labels(keep);
}

DeepFeatures prepare_deep(const Network& full, const DatasetSplit& split, const DeepNetShape& shape,
                          const SgdOptions& sgd) {
  // Test labels are withheld before the net sees the graph.
  const Network visible = prediction_network(full, split);
  DeepNet net = train_wide_deep(visible, split.train, split.validation, shape, sgd);
  Matrix hidden = embed_all(net, full);
  ParameterVector head = head_parameters(
      net, ModelShape{full.num_categories(), full.feature_dim(), static_cast<std::size_t>(hidden.cols())});
  return {std::move(net), std::move(hidden), std::move(head)};
}

ExperimentResult run_experiment(const Network& full, const DatasetSplit& split,
                                const ExperimentOptions& options) {
  ExperimentResult result;
  const auto start = std::chrono::steady_clock::now();
  Matrix hidden(static_cast<Eigen::Index>(full.num_nodes()), 0);
  std::optional<ParameterVector> head;
  if (options.deep) {
    auto deep = prepare_deep(full, split, options.deep_shape, options.sgd);
    result.deep = std::move(deep.net);
    hidden = std::move(deep.hidden);
    head = std::move(deep.head);
  }
  const TrainingTask task(full, split, hidden, head);
  result.run = train(task, options.config);
  result.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("{} trained in {:.3f}s, best validation accuracy {:.4f}",
               to_string(options.config.learner), result.train_seconds, result.run.best_val_acc);

  const Network visible = prediction_network(full, split);
  const FactorModel model(visible, hidden);
  PredictOptions predict_options;
  predict_options.method = options.method.value_or(default_predictor(options.config.learner));
  predict_options.steps = options.predict_steps;
  predict_options.seed = options.config.seed;
  predict_options.lbp = {options.config.lbp_max_sweeps, options.config.lbp_message_tolerance,
                         options.config.lbp_damping};
  predict_options.icm_sweeps = options.config.icm_sweeps;
  result.predictions = predict(model, result.run.best_params, predict_options);
  result.test = evaluate(full, split.test, result.predictions);
  return result;
}

}  // namespace ssfgm
