#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssfgm/deep_net.hpp"
#include "ssfgm/factor_model.hpp"
#include "ssfgm/lbp.hpp"
#include "ssfgm/network.hpp"
#include "ssfgm/params.hpp"

namespace ssfgm {

enum class LearnerKind { LBP, SR, MH, MHPlus };

std::string_view to_string(LearnerKind kind);
/// Accepts "lbp", "sr", "mh", "mh+".
LearnerKind parse_learner(std::string_view text);

struct LearnerConfig {
  LearnerKind learner = LearnerKind::MHPlus;
  double eta = 1.0;
  std::size_t batch_size = 5000;
  /// Gradient applications between validation evaluations.
  std::size_t delta = 1000;
  /// Evaluations without improvement before stopping.
  std::size_t epsilon = 20;
  /// Cap on gradient applications for MH and MH+.
  std::size_t max_iterations = 1000000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  // LBP learner: I1 outer iterations of I2-sweep propagation.
  std::size_t lbp_outer_iterations = 100;
  int lbp_max_sweeps = 50;
  double lbp_message_tolerance = 1e-6;
  double lbp_damping = 0.5;
  /// Converged when every gradient coordinate is below this.
  double gradient_tolerance = 1e-6;

  // Softmax-regression learner.
  double sr_l2 = 0.0;
  std::size_t sr_max_rounds = 10;
  int sr_max_solver_iterations = 200;

  /// Coordinate-ascent sweeps when decoding for validation.
  std::size_t icm_sweeps = 10;

  /// Replace the sampled MH+ gradient by the exact one (tiny instances only).
  bool oracle_gradient = false;

  /// Paper defaults: eta = 0.1 for MH, 1 for MH+.
  static LearnerConfig defaults_for(LearnerKind kind);
  void validate() const;
};

enum class StopReason { EarlyStopped, MaxIterations, Converged };
std::string_view to_string(StopReason reason);

struct HistoryEntry {
  std::size_t iteration = 0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double log_potential_proxy = 0.0;
};

struct TrainingRun {
  LearnerConfig config;
  std::vector<HistoryEntry> history;
  ParameterVector best_params;
  /// Parameters when training ended, whatever their validation score.
  ParameterVector final_params;
  double best_val_acc = 0.0;
  StopReason stop_reason = StopReason::MaxIterations;
};

/// Everything a learner may see: the graph with only training labels, the
/// validation labels kept aside for early stopping, and optional deep
/// embeddings. Test labels never enter a task.
class TrainingTask {
 public:
  TrainingTask(const Network& full, const DatasetSplit& split);
  TrainingTask(const Network& full, const DatasetSplit& split, Matrix hidden,
               std::optional<ParameterVector> head_init = std::nullopt);
  TrainingTask(const TrainingTask&) = delete;
  TrainingTask& operator=(const TrainingTask&) = delete;

  const FactorModel& model() const { return model_; }
  const Network& network() const { return network_; }
  std::span<const NodeId> train_nodes() const { return train_; }
  std::span<const NodeId> validation_nodes() const { return validation_; }
  CategoryId validation_label(std::size_t i) const { return validation_labels_[i]; }
  const std::optional<ParameterVector>& head_init() const { return head_init_; }

  /// Fraction of validation nodes whose entry in `config` matches.
  double validation_accuracy(const LabelConfiguration& config) const;

 private:
  Network network_;
  FactorModel model_;
  std::vector<NodeId> train_;
  std::vector<NodeId> validation_;
  std::vector<CategoryId> validation_labels_;
  std::optional<ParameterVector> head_init_;
};

/// Seeds alpha and beta from a trained wide-and-deep head.
ParameterVector head_parameters(const DeepNet& deep, const ModelShape& shape);

TrainingRun train_lbp(const TrainingTask& task, const LearnerConfig& config,
                      const ParameterVector* initial = nullptr);
TrainingRun train_sr(const TrainingTask& task, const LearnerConfig& config);
TrainingRun train_mh(const TrainingTask& task, const LearnerConfig& config);
TrainingRun train_mh_plus(const TrainingTask& task, const LearnerConfig& config);
/// MH or MH+ with the batch divided over config.workers chain pairs.
TrainingRun train_parallel(const TrainingTask& task, const LearnerConfig& config);
/// Dispatches on config.learner.
TrainingRun train(const TrainingTask& task, const LearnerConfig& config);

// Building blocks exposed for tests.

/// Softmax-regression objective: mean conditional log-likelihood of the
/// labels of `examples` under p(y_i | rest) with neighbor labels taken from
/// `config`, minus sr_l2/2 |theta_active|^2. With `with_correlation` false
/// only the attribute and deep blocks take part.
class SoftmaxObjective {
 public:
  SoftmaxObjective(const FactorModel& model, std::span<const NodeId> examples,
                   const LabelConfiguration& config, bool with_correlation, double l2);

  /// Number of leading entries of the flat parameter vector being fitted.
  std::size_t num_active() const { return active_; }
  double value(const ParameterVector& theta) const;
  /// Returns the value; writes d value / d theta into `gradient`.
  double value_and_gradient(const ParameterVector& theta, SufficientStatistics& gradient) const;

 private:
  const FactorModel& model_;
  std::span<const NodeId> examples_;
  const LabelConfiguration& config_;
  bool with_correlation_;
  double l2_;
  std::size_t active_;
};

struct SoftmaxFit {
  ParameterVector theta;
  std::vector<double> objective_trace;  // objective after each solver iteration
};

/// Maximizes the objective with L-BFGS starting from `start`.
SoftmaxFit fit_softmax(const SoftmaxObjective& objective, ParameterVector start,
                       int max_iterations);

/// Argmax of the unary factors; labeled nodes keep their label.
LabelConfiguration unary_decode(const FactorModel& model, const ParameterVector& theta);
/// Iterated conditional modes from `init` until no node changes or
/// `max_sweeps` sweeps; labeled nodes keep their label.
LabelConfiguration icm_decode(const FactorModel& model, const ParameterVector& theta,
                              LabelConfiguration init, std::size_t max_sweeps);

enum class PredictMethod { MaxSum, MHSample };
PredictMethod default_predictor(LearnerKind kind);

struct PredictOptions {
  PredictMethod method = PredictMethod::MHSample;
  /// Sampling steps for MHSample; 0 means 10 per node.
  std::uint64_t steps = 0;
  std::uint64_t seed = 1;
  LbpOptions lbp{};
  std::size_t icm_sweeps = 10;
};

/// Most likely configuration with the model's labels clamped.
LabelConfiguration predict(const FactorModel& model, const ParameterVector& theta,
                           const PredictOptions& options);

}  // namespace ssfgm
