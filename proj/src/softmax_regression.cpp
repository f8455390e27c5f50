#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <ceres/iteration_callback.h>

#include "learning_common.hpp"
#include "ssfgm/error.hpp"

namespace ssfgm {

namespace {

// Negated objective over the active prefix, in the form the solver wants.
class NegatedObjective final : public ceres::FirstOrderFunction {
 public:
  NegatedObjective(const SoftmaxObjective& objective, const ParameterVector& frame)
      : objective_(objective), frame_(frame), gradient_(frame.shape()) {}

  bool Evaluate(const double* parameters, double* cost, double* gradient) const override {
    auto flat = frame_.flat();
    std::copy_n(parameters, objective_.num_active(), flat.begin());
    if (gradient == nullptr) {
      *cost = -objective_.value(frame_);
    } else {
      *cost = -objective_.value_and_gradient(frame_, gradient_);
      const auto g = gradient_.flat();
      for (std::size_t i = 0; i < objective_.num_active(); ++i) gradient[i] = -g[i];
    }
    return std::isfinite(*cost);
  }

  int NumParameters() const override { return static_cast<int>(objective_.num_active()); }

 private:
  const SoftmaxObjective& objective_;
  mutable ParameterVector frame_;
  mutable SufficientStatistics gradient_;
};

class TraceRecorder final : public ceres::IterationCallback {
 public:
  explicit TraceRecorder(std::vector<double>& trace) : trace_(trace) {}
  ceres::CallbackReturnType operator()(const ceres::IterationSummary& summary) override {
    if (summary.iteration > 0 && !summary.step_is_successful) return ceres::SOLVER_CONTINUE;
    trace_.push_back(-summary.cost);
    return ceres::SOLVER_CONTINUE;
  }

 private:
  std::vector<double>& trace_;
};

}  // namespace

SoftmaxObjective::SoftmaxObjective(const FactorModel& model, std::span<const NodeId> examples,
                                   const LabelConfiguration& config, bool with_correlation,
                                   double l2)
    : model_(model),
      examples_(examples),
      config_(config),
      with_correlation_(with_correlation),
      l2_(l2),
      active_(with_correlation ? model.shape().size() : model.shape().directed_offset()) {
  for (NodeId v : examples_)
    if (!model_.network().is_labeled(v))
      throw Error(ErrorCode::InvalidArgument, "softmax example node is unlabeled");
}

double SoftmaxObjective::value(const ParameterVector& theta) const {
  const CategoryId c = model_.num_categories();
  std::vector<double> scores(static_cast<std::size_t>(c));
  double total = 0.0;
  for (NodeId v : examples_) {
    double top = -std::numeric_limits<double>::infinity();
    for (CategoryId k = 0; k < c; ++k) {
      const double s = with_correlation_ ? model_.conditional_score(theta, config_, v, k)
                                         : model_.log_unary(theta, v, k);
      scores[static_cast<std::size_t>(k)] = s;
      top = std::max(top, s);
    }
    double sum = 0.0;
    for (double s : scores) sum += std::exp(s - top);
    total += scores[static_cast<std::size_t>(model_.network().label(v))] - top - std::log(sum);
  }
  const double mean = examples_.empty() ? 0.0 : total / static_cast<double>(examples_.size());
  double penalty = 0.0;
  const auto flat = theta.flat();
  for (std::size_t i = 0; i < active_; ++i) penalty += flat[i] * flat[i];
  return mean - 0.5 * l2_ * penalty;
}

double SoftmaxObjective::value_and_gradient(const ParameterVector& theta,
                                            SufficientStatistics& gradient) const {
  const CategoryId c = model_.num_categories();
  gradient = SufficientStatistics(theta.shape());
  std::vector<double> scores(static_cast<std::size_t>(c));
  double total = 0.0;
  const double inv_n = examples_.empty() ? 0.0 : 1.0 / static_cast<double>(examples_.size());
  for (NodeId v : examples_) {
    double top = -std::numeric_limits<double>::infinity();
    for (CategoryId k = 0; k < c; ++k) {
      const double s = with_correlation_ ? model_.conditional_score(theta, config_, v, k)
                                         : model_.log_unary(theta, v, k);
      scores[static_cast<std::size_t>(k)] = s;
      top = std::max(top, s);
    }
    double sum = 0.0;
    for (double& s : scores) {
      s = std::exp(s - top);
      sum += s;
    }
    const CategoryId y = model_.network().label(v);
    total += std::log(scores[static_cast<std::size_t>(y)] / sum);
    for (CategoryId k = 0; k < c; ++k) {
      const double weight = ((k == y ? 1.0 : 0.0) - scores[static_cast<std::size_t>(k)] / sum) * inv_n;
      if (weight == 0.0) continue;
      if (with_correlation_)
        model_.accumulate_softmax_local(gradient, config_, v, k, weight);
      else
        model_.accumulate_unary(gradient, v, k, weight);
    }
  }
  double penalty = 0.0;
  const auto flat = theta.flat();
  auto g = gradient.flat();
  for (std::size_t i = 0; i < active_; ++i) {
    penalty += flat[i] * flat[i];
    g[i] -= l2_ * flat[i];
  }
  return total * inv_n - 0.5 * l2_ * penalty;
}

SoftmaxFit fit_softmax(const SoftmaxObjective& objective, ParameterVector start,
                       int max_iterations) {
  SoftmaxFit fit;
  if (objective.num_active() == 0 || max_iterations <= 0) {
    fit.theta = std::move(start);
    fit.objective_trace.push_back(objective.value(fit.theta));
    return fit;
  }
  std::vector<double> x(start.flat().begin(),
                        start.flat().begin() + static_cast<std::ptrdiff_t>(objective.num_active()));
  ceres::GradientProblem problem(new NegatedObjective(objective, start));
  TraceRecorder recorder(fit.objective_trace);
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.max_num_iterations = max_iterations;
  options.function_tolerance = 1e-12;
  options.gradient_tolerance = 1e-10;
  options.parameter_tolerance = 1e-12;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;
  options.callbacks.push_back(&recorder);
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);

  fit.theta = std::move(start);
  std::copy(x.begin(), x.end(), fit.theta.flat().begin());
  if (!fit.theta.all_finite()) throw Error(ErrorCode::NumericFailure, "softmax fit diverged");
  return fit;
}

TrainingRun train_sr(const TrainingTask& task, const LearnerConfig& config) {
  config.validate();
  if (task.train_nodes().empty())
    throw Error(ErrorCode::NoTrainingLabels, "softmax regression needs training labels");
  const FactorModel& model = task.model();

  TrainingRun run;
  run.config = config;
  ParameterVector theta = task.head_init() ? *task.head_init() : ParameterVector(model.shape());

  // Step 1: attribute and deep weights from the labeled nodes alone.
  const LabelConfiguration unused(model.num_nodes(), 0);
  {
    const SoftmaxObjective objective(model, task.train_nodes(), unused, false, config.sr_l2);
    theta = fit_softmax(objective, std::move(theta), config.sr_max_solver_iterations).theta;
  }
  // Step 2: fill in the unlabeled nodes.
  LabelConfiguration current = unary_decode(model, theta);
  run.history.push_back(detail::make_history_entry(task, theta, current, 0));
  run.best_params = theta;
  run.best_val_acc = run.history.back().val_acc;
  run.stop_reason = StopReason::MaxIterations;

  // Steps 3 and 4 while validation accuracy strictly improves.
  for (std::size_t round = 1; round <= config.sr_max_rounds; ++round) {
    const SoftmaxObjective objective(model, task.train_nodes(), current, true, config.sr_l2);
    ParameterVector next = fit_softmax(objective, theta, config.sr_max_solver_iterations).theta;
    detail::require_finite(next, "softmax regression");
    LabelConfiguration decoded = icm_decode(model, next, current, config.icm_sweeps);
    run.history.push_back(detail::make_history_entry(task, next, decoded, round));
    if (run.history.back().val_acc <= run.best_val_acc) {
      run.stop_reason = StopReason::Converged;
      break;
    }
    run.best_val_acc = run.history.back().val_acc;
    run.best_params = next;
    theta = std::move(next);
    current = std::move(decoded);
  }
  run.final_params = std::move(theta);
  return run;
}

}  // namespace ssfgm
