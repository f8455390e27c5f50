#include "learning_common.hpp"
#include "ssfgm/error.hpp"
#include "ssfgm/lbp.hpp"

namespace ssfgm {

TrainingRun train_lbp(const TrainingTask& task, const LearnerConfig& config,
                      const ParameterVector* initial) {
  config.validate();
  const FactorModel& model = task.model();
  const LbpOptions options{config.lbp_max_sweeps, config.lbp_message_tolerance, config.lbp_damping};

  TrainingRun run;
  run.config = config;
  ParameterVector theta = initial ? *initial : ParameterVector(model.shape());
  model.check_shape(theta);

  auto evaluate = [&](std::size_t iteration) {
    const auto decoded = max_sum_decode(model, theta, true, options);
    run.history.push_back(detail::make_history_entry(task, theta, decoded, iteration));
  };
  evaluate(0);
  run.best_params = theta;
  run.best_val_acc = run.history.back().val_acc;
  detail::EarlyStopping stopping(config.epsilon);
  stopping.record(run.best_val_acc);

  run.stop_reason = StopReason::MaxIterations;
  for (std::size_t iteration = 1; iteration <= config.lbp_outer_iterations; ++iteration) {
    // E_data S from the clamped run, E_model S from the free run.
    SufficientStatistics gradient =
        expected_statistics(model, sum_product(model, theta, true, options));
    gradient -= expected_statistics(model, sum_product(model, theta, false, options));
    if (gradient.max_abs() < config.gradient_tolerance) {
      run.stop_reason = StopReason::Converged;
      break;
    }
    add_scaled(theta, gradient, config.eta);
    detail::require_finite(theta, "lbp");

    evaluate(iteration);
    if (stopping.record(run.history.back().val_acc)) {
      run.best_val_acc = run.history.back().val_acc;
      run.best_params = theta;
    }
    if (stopping.exhausted()) {
      run.stop_reason = StopReason::EarlyStopped;
      break;
    }
  }
  run.final_params = std::move(theta);
  return run;
}

}  // namespace ssfgm
