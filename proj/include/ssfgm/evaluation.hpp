#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssfgm/learning.hpp"
#include "ssfgm/network.hpp"

namespace ssfgm {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // true count
  std::size_t predicted = 0;  // predicted count
};

struct MetricsReport {
  double micro_accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
  /// confusion[truth][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  /// Categories never predicted; their precision is 0 by convention.
  std::vector<CategoryId> never_predicted;
  std::vector<std::string> category_names;
};

/// Counts over the parallel arrays `truth` and `predicted` (category ids in
/// [0, categories)). Macro values average over all categories.
MetricsReport evaluate(std::span<const CategoryId> truth, std::span<const CategoryId> predicted,
                       std::size_t categories);
/// Scores `predicted` on `nodes` against the labels of `truth_net`.
MetricsReport evaluate(const Network& truth_net, std::span<const NodeId> nodes,
                       const LabelConfiguration& predicted);

std::string format_table(const MetricsReport& report);
void to_json(nlohmann::json& j, const MetricsReport& report);

/// Neighbor majority vote: every unlabeled node takes the most frequent
/// label among its currently labeled neighbors (ties to the smallest id),
/// repeated until stable or `max_rounds`; nodes never reached get the modal
/// label overall. Labeled nodes of `net` are never changed.
LabelConfiguration glp_baseline(const Network& net, std::size_t max_rounds = 100);

/// Attribute-only softmax regression fitted on the task's training labels
/// and applied to every node.
LabelConfiguration logistic_baseline(const TrainingTask& task, double l2 = 0.0,
                                     int max_solver_iterations = 200);

struct SyntheticSpec {
  std::size_t nodes = 2000;
  std::size_t categories = 5;
  double p_same = 0.95;
  double mean_degree = 10.0;
  double feature_signal = 1.0;
  /// Feature dimension; 0 means one per category.
  std::size_t feature_dim = 0;
  double labeled_fraction = 0.5;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Uniform categories, round(N * mean_degree / 2) distinct undirected edges
/// that join same-category nodes with probability p_same, Gaussian features
/// around feature_signal * e_(c mod D), and round(labeled_fraction * N)
/// labeled nodes picked uniformly.
Network generate_synthetic(const SyntheticSpec& spec);

}  // namespace ssfgm
