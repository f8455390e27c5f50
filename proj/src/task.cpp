#include <algorithm>
#include <cmath>

#include "learning_common.hpp"
#include "ssfgm/error.hpp"

namespace ssfgm {

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::LBP: return "lbp";
    case LearnerKind::SR: return "sr";
    case LearnerKind::MH: return "mh";
    case LearnerKind::MHPlus: return "mh+";
  }
  return "?";
}

LearnerKind parse_learner(std::string_view text) {
  if (text == "lbp") return LearnerKind::LBP;
  if (text == "sr") return LearnerKind::SR;
  if (text == "mh") return LearnerKind::MH;
  if (text == "mh+" || text == "mhplus") return LearnerKind::MHPlus;
  throw Error(ErrorCode::InvalidArgument, "unknown learner '" + std::string(text) + "'");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::EarlyStopped: return "early_stopped";
    case StopReason::MaxIterations: return "max_iterations";
    case StopReason::Converged: return "converged";
  }
  return "?";
}

LearnerConfig LearnerConfig::defaults_for(LearnerKind kind) {
  LearnerConfig c;
  c.learner = kind;
  c.eta = kind == LearnerKind::MH ? 0.1 : 1.0;
  return c;
}

void LearnerConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(eta > 0.0) || !std::isfinite(eta)) fail("eta must be > 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (delta < 1) fail("delta must be >= 1");
  if (epsilon < 1) fail("epsilon must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (lbp_max_sweeps < 1) fail("lbp_max_sweeps must be >= 1");
  if (sr_l2 < 0.0) fail("sr_l2 must be >= 0");
}

TrainingTask::TrainingTask(const Network& full, const DatasetSplit& split)
    : TrainingTask(full, split, Matrix(static_cast<Eigen::Index>(full.num_nodes()), 0)) {}

TrainingTask::TrainingTask(const Network& full, const DatasetSplit& split, Matrix hidden,
                           std::optional<ParameterVector> head_init)
    : network_(full.restrict_labels(split.train)),
      model_(network_, std::move(hidden)),
      train_(split.train),
      validation_(split.validation),
      head_init_(std::move(head_init)) {
  validation_labels_.reserve(validation_.size());
  for (NodeId v : validation_) {
    if (!full.is_labeled(v))
      throw Error(ErrorCode::InvalidArgument, "validation node " + full.node_name(v) + " is unlabeled");
    validation_labels_.push_back(full.label(v));
  }
  if (head_init_) model_.check_shape(*head_init_);
}

double TrainingTask::validation_accuracy(const LabelConfiguration& config) const {
  if (validation_.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < validation_.size(); ++i)
    hits += config[validation_[i]] == validation_labels_[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(validation_.size());
}

ParameterVector head_parameters(const DeepNet& deep, const ModelShape& shape) {
  ParameterVector theta(shape);
  const auto s = deep.shape();
  if (s.input != shape.features || s.hidden2 != shape.hidden || s.categories != shape.categories)
    throw Error(ErrorCode::DimensionMismatch, "deep head does not match the model shape");
  for (CategoryId k = 0; k < static_cast<CategoryId>(shape.categories); ++k) {
    auto a = theta.alpha(k);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = deep.head_alpha(k, static_cast<Eigen::Index>(j));
    auto b = theta.beta(k);
    for (std::size_t j = 0; j < b.size(); ++j) b[j] = deep.head_beta(k, static_cast<Eigen::Index>(j));
  }
  return theta;
}

TrainingRun train(const TrainingTask& task, const LearnerConfig& config) {
  switch (config.learner) {
    case LearnerKind::LBP: return train_lbp(task, config);
    case LearnerKind::SR: return train_sr(task, config);
    case LearnerKind::MH: return train_mh(task, config);
    case LearnerKind::MHPlus: return train_mh_plus(task, config);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown learner");
}

namespace detail {

double conditional_accuracy(const FactorModel& model, const ParameterVector& theta,
                            const LabelConfiguration& config, std::span<const NodeId> nodes) {
  if (nodes.empty()) return 0.0;
  const CategoryId c = model.num_categories();
  std::size_t hits = 0;
  for (NodeId v : nodes) {
    CategoryId best = 0;
    double best_score = model.conditional_score(theta, config, v, 0);
    for (CategoryId k = 1; k < c; ++k) {
      const double s = model.conditional_score(theta, config, v, k);
      if (s > best_score) {
        best_score = s;
        best = k;
      }
    }
    hits += best == model.network().label(v) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(nodes.size());
}

HistoryEntry make_history_entry(const TrainingTask& task, const ParameterVector& theta,
                                const LabelConfiguration& decoded, std::size_t iteration) {
  HistoryEntry h;
  h.iteration = iteration;
  h.train_acc = conditional_accuracy(task.model(), theta, decoded, task.train_nodes());
  h.val_acc = task.validation_accuracy(decoded);
  h.log_potential_proxy = task.model().log_potential(theta, decoded);
  return h;
}

LabelConfiguration validation_decode(const TrainingTask& task, const ParameterVector& theta,
                                     std::size_t icm_sweeps) {
  return icm_decode(task.model(), theta, unary_decode(task.model(), theta), icm_sweeps);
}

void require_finite(const ParameterVector& theta, const char* learner) {
  if (!theta.all_finite())
    throw Error(ErrorCode::NumericFailure, std::string(learner) + " produced non-finite parameters");
}

}  // namespace detail
}  // namespace ssfgm
