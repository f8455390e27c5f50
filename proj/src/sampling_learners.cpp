#include <barrier>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "learning_common.hpp"
#include "ssfgm/error.hpp"
#include "ssfgm/exact_oracle.hpp"
#include "ssfgm/mh.hpp"
#include "ssfgm/rng.hpp"

namespace ssfgm {

namespace {

// Fixed set of threads that run one job per round between two barriers.
// Slot 0 is the calling thread.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers)
      : start_(static_cast<std::ptrdiff_t>(workers)),
        done_(static_cast<std::ptrdiff_t>(workers)),
        errors_(workers) {
    for (std::size_t w = 1; w < workers; ++w) threads_.emplace_back([this, w] { loop(w); });
  }

  ~WorkerPool() {
    stop_ = true;
    start_.arrive_and_wait();
    for (auto& t : threads_) t.join();
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void run(const std::function<void(std::size_t)>& job) {
    job_ = &job;
    start_.arrive_and_wait();
    invoke(0);
    done_.arrive_and_wait();
    for (auto& e : errors_)
      if (e) std::rethrow_exception(std::exchange(e, nullptr));
  }

 private:
  void loop(std::size_t w) {
    for (;;) {
      start_.arrive_and_wait();
      if (stop_) return;
      invoke(w);
      done_.arrive_and_wait();
    }
  }

  void invoke(std::size_t w) {
    try {
      (*job_)(w);
    } catch (...) {
      errors_[w] = std::current_exception();
    }
  }

  std::barrier<> start_;
  std::barrier<> done_;
  std::vector<std::exception_ptr> errors_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  bool stop_ = false;
};

// What one worker owns across rounds.
struct WorkerState {
  CounterRng rng;
  std::optional<ChainState> data_chain;   // clamped (MH+ only)
  std::optional<ChainState> model_chain;  // free
  SufficientStatistics gradient;
};

// Sums the worker gradients in a fixed pairwise tree into slot 0.
void tree_reduce(std::vector<WorkerState>& workers) {
  for (std::size_t stride = 1; stride < workers.size(); stride *= 2)
    for (std::size_t i = 0; i + stride < workers.size(); i += 2 * stride)
      workers[i].gradient += workers[i + stride].gradient;
}

// One batch share of Algorithm MH: a free chain whose accepted moves
// trigger corrective updates when training accuracy and likelihood
// disagree.
void mh_steps(const FactorModel& model, const ParameterVector& theta, WorkerState& w,
              std::uint64_t steps) {
  ChainState& chain = *w.model_chain;
  const Network& net = model.network();
  for (std::uint64_t t = 0; t < steps; ++t) {
    const StepOutcome out = chain.step(theta, w.rng);
    if (!out.accepted || !net.is_labeled(out.node)) continue;
    const CategoryId truth = net.label(out.node);
    double sign = 0.0;
    if (out.new_category == truth && out.delta < 0.0) sign = 1.0;
    if (out.old_category == truth && out.delta > 0.0) sign = -1.0;
    if (sign == 0.0) continue;
    // S(Y*) - S(Y) is the full-increment local difference at the site,
    // which does not depend on the site's own label.
    model.accumulate_softmax_local(w.gradient, chain.config(), out.node, out.new_category, sign);
    model.accumulate_softmax_local(w.gradient, chain.config(), out.node, out.old_category, -sign);
  }
}

// One batch share of Algorithm MH+: a shared proposal evaluated in both
// chains, local statistics taken after each chain's decision.
void mh_plus_steps(const FactorModel& model, const ParameterVector& theta, WorkerState& w,
                   std::uint64_t steps) {
  ChainState& data = *w.data_chain;
  ChainState& free = *w.model_chain;
  const auto n = static_cast<std::uint64_t>(model.num_nodes());
  const auto c = static_cast<std::uint64_t>(model.num_categories());
  for (std::uint64_t t = 0; t < steps; ++t) {
    const auto v = static_cast<NodeId>(w.rng.uniform_index(n));
    const auto k = static_cast<CategoryId>(w.rng.uniform_index(c));
    const bool a1 = data.try_move(theta, v, k, w.rng);
    const bool a2 = free.try_move(theta, v, k, w.rng);
    if (!a1 && !a2) continue;
    model.accumulate_local(w.gradient, data.config(), v, 1.0);
    model.accumulate_local(w.gradient, free.config(), v, -1.0);
  }
}

TrainingRun train_sampling(const TrainingTask& task, const LearnerConfig& config, bool two_chain) {
  config.validate();
  const FactorModel& model = task.model();

  TrainingRun run;
  run.config = config;
  {
    LearnerConfig init = config;
    init.learner = LearnerKind::SR;
    run.best_params = train_sr(task, init).best_params;
  }
  ParameterVector theta = run.best_params;
  run.history.push_back(
      detail::make_history_entry(task, theta, detail::validation_decode(task, theta, config.icm_sweeps), 0));
  run.best_val_acc = run.history.back().val_acc;
  detail::EarlyStopping stopping(config.epsilon);
  stopping.record(run.best_val_acc);

  const bool can_move = model.num_categories() >= 2 && model.num_nodes() > 0;
  const std::size_t workers = config.workers;
  const CounterRng root(config.seed);
  std::vector<WorkerState> state;
  state.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) {
    WorkerState w{root.split(0x5eed0000ULL + i), std::nullopt, std::nullopt,
                  SufficientStatistics(model.shape())};
    if (can_move && !config.oracle_gradient) {
      if (two_chain) {
        w.data_chain.emplace(model, theta, random_configuration(model, true, w.rng), true,
                             ProposalScope::AllNodes);
        w.model_chain.emplace(model, theta, random_configuration(model, false, w.rng), false,
                              ProposalScope::AllNodes);
      } else {
        w.model_chain.emplace(model, theta, random_configuration(model, false, w.rng), false,
                              ProposalScope::FreeNodes);
      }
    }
    state.push_back(std::move(w));
  }

  const std::uint64_t per_worker = config.batch_size / workers;
  const std::uint64_t remainder = config.batch_size % workers;
  const std::function<void(std::size_t)> job = [&](std::size_t i) {
    WorkerState& w = state[i];
    w.gradient.fill(0.0);
    if (!w.model_chain) return;
    const std::uint64_t steps = per_worker + (i < remainder ? 1 : 0);
    if (two_chain)
      mh_plus_steps(model, theta, w, steps);
    else
      mh_steps(model, theta, w, steps);
  };
  std::optional<WorkerPool> pool;
  if (workers > 1) pool.emplace(workers);

  run.stop_reason = StopReason::MaxIterations;
  for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
    if (config.oracle_gradient) {
      state[0].gradient = exact_gradient(model, theta);
    } else if (pool) {
      pool->run(job);
      tree_reduce(state);
    } else {
      job(0);
    }
    add_scaled(theta, state[0].gradient, config.eta);
    detail::require_finite(theta, two_chain ? "mh+" : "mh");

    if (iteration % config.delta != 0 && iteration != config.max_iterations) continue;
    const auto decoded = detail::validation_decode(task, theta, config.icm_sweeps);
    run.history.push_back(detail::make_history_entry(task, theta, decoded, iteration));
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

}  // namespace

TrainingRun train_mh(const TrainingTask& task, const LearnerConfig& config) {
  return train_sampling(task, config, false);
}

TrainingRun train_mh_plus(const TrainingTask& task, const LearnerConfig& config) {
  return train_sampling(task, config, true);
}

TrainingRun train_parallel(const TrainingTask& task, const LearnerConfig& config) {
  return train_sampling(task, config, config.learner != LearnerKind::MH);
}

}  // namespace ssfgm
