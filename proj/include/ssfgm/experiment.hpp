#pragma once

#include <optional>

#include "ssfgm/deep_net.hpp"
#include "ssfgm/evaluation.hpp"
#include "ssfgm/learning.hpp"

namespace ssfgm {

struct ExperimentOptions {
  LearnerConfig config;
  bool deep = false;
  DeepNetShape deep_shape{};
  SgdOptions sgd{};
  /// Overrides the learner's default predictor when set.
  std::optional<PredictMethod> method;
  std::uint64_t predict_steps = 0;
};

struct ExperimentResult {
  TrainingRun run;
  std::optional<DeepNet> deep;
  LabelConfiguration predictions;
  MetricsReport test;
  double train_seconds = 0.0;
};

struct DeepFeatures {
  DeepNet net;
  Matrix hidden;         // N x H2 embeddings
  ParameterVector head;  // alpha and beta seeded from the softmax head
};

/// Trains the wide-and-deep net on the training labels (validation labels
/// pick the epoch) and embeds every node.
DeepFeatures prepare_deep(const Network& full, const DatasetSplit& split, const DeepNetShape& shape,
                          const SgdOptions& sgd);

/// Network seen at prediction time: training and validation labels kept,
/// test labels withheld.
Network prediction_network(const Network& full, const DatasetSplit& split);

/// Optional wide-and-deep pre-training, the configured learner, prediction
/// with the paired predictor and test-split metrics.
ExperimentResult run_experiment(const Network& full, const DatasetSplit& split,
                                const ExperimentOptions& options);

}  // namespace ssfgm
