#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ssfgm/factor_model.hpp"
#include "ssfgm/rng.hpp"

namespace ssfgm {

struct Proposal {
  NodeId node = 0;
  CategoryId category = 0;
};

struct StepOutcome {
  bool accepted = false;
  NodeId node = 0;
  CategoryId old_category = 0;
  CategoryId new_category = 0;
  double delta = 0.0;  // log p(Y*) - log p(Y)
};

/// Which nodes a chain draws proposal sites from.
enum class ProposalScope {
  /// Unlabeled nodes only when clamped, every node otherwise.
  FreeNodes,
  /// Every node; a clamped chain rejects moves at labeled nodes. Used when
  /// two chains share one proposal.
  AllNodes,
};

/// MH acceptance with symmetric proposals: accept with min(1, exp(delta)).
inline bool accept_move(double delta, CounterRng& rng) {
  if (delta >= 0.0) return true;
  return rng.uniform01() < std::exp(delta);
}

/// One Markov chain over label configurations, with single-site uniform
/// proposals. Keeps a running log-potential that is recomputed from scratch
/// every kRefreshInterval steps.
class ChainState {
 public:
  static constexpr std::uint64_t kRefreshInterval = 100000;

  /// Labeled entries of `init` are overwritten with the labels when clamped.
  /// Throws NoProposableSite for a clamped FreeNodes chain without unlabeled
  /// nodes.
  ChainState(const FactorModel& model, const ParameterVector& theta, LabelConfiguration init,
             bool clamped, ProposalScope scope = ProposalScope::FreeNodes);

  const LabelConfiguration& config() const { return config_; }
  bool clamped() const { return clamped_; }
  double log_potential() const { return log_potential_; }
  bool frozen(NodeId v) const { return clamped_ && model_->network().is_labeled(v); }

  /// Uniform site from the scope, then a uniform category different from
  /// the site's current one. Requires C >= 2.
  Proposal propose(CounterRng& rng) const;

  double delta(const ParameterVector& theta, NodeId v, CategoryId k) const {
    return model_->delta_log_potential(theta, config_, v, k);
  }

  /// Full MH step: propose, evaluate, accept or reject.
  StepOutcome step(const ParameterVector& theta, CounterRng& rng);

  /// Evaluates an externally drawn proposal. Frozen sites and proposals
  /// equal to the current label are not moves and return false.
  bool try_move(const ParameterVector& theta, NodeId v, CategoryId k, CounterRng& rng);

  /// Recomputes the cached log-potential under `theta`.
  void refresh(const ParameterVector& theta);

 private:
  void apply(const ParameterVector& theta, NodeId v, CategoryId k, double delta);

  const FactorModel* model_;
  LabelConfiguration config_;
  bool clamped_;
  ProposalScope scope_;
  std::vector<NodeId> sites_;
  double log_potential_ = 0.0;
  std::uint64_t since_refresh_ = 0;
};

/// Uniformly random configuration; labeled nodes take their label when
/// `clamp_labels` is set.
LabelConfiguration random_configuration(const FactorModel& model, bool clamp_labels,
                                        CounterRng& rng);

/// Runs a clamped chain from `init` for `steps` steps and returns the
/// highest-scoring configuration visited (the first one on ties).
LabelConfiguration sample_map(const FactorModel& model, const ParameterVector& theta,
                              LabelConfiguration init, std::uint64_t steps, CounterRng& rng);

}  // namespace ssfgm
