#pragma once

// Pieces shared by the learner implementations.

#include <cstddef>

#include "ssfgm/learning.hpp"

namespace ssfgm::detail {

/// Validation-driven early stopping: `patience` evaluations without a
/// strict improvement end training.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  /// Records an evaluation; true when it is a new best.
  bool record(double score) {
    if (!seen_ || score > best_) {
      seen_ = true;
      best_ = score;
      stale_ = 0;
      return true;
    }
    ++stale_;
    return false;
  }

  bool exhausted() const { return stale_ >= patience_; }
  double best() const { return best_; }

 private:
  std::size_t patience_;
  bool seen_ = false;
  double best_ = 0.0;
  std::size_t stale_ = 0;
};

/// Fraction of `nodes` whose conditional argmax given the rest of `config`
/// equals their label.
double conditional_accuracy(const FactorModel& model, const ParameterVector& theta,
                            const LabelConfiguration& config, std::span<const NodeId> nodes);

/// History row for `theta` given a decoded configuration.
HistoryEntry make_history_entry(const TrainingTask& task, const ParameterVector& theta,
                                const LabelConfiguration& decoded, std::size_t iteration);

/// ICM decode from the unary argmax, a pure function of theta.
LabelConfiguration validation_decode(const TrainingTask& task, const ParameterVector& theta,
                                     std::size_t icm_sweeps);

void require_finite(const ParameterVector& theta, const char* learner);

}  // namespace ssfgm::detail
