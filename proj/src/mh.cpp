#include "ssfgm/mh.hpp"

#include "ssfgm/error.hpp"

namespace ssfgm {

ChainState::ChainState(const FactorModel& model, const ParameterVector& theta,
                       LabelConfiguration init, bool clamped, ProposalScope scope)
    : model_(&model), config_(std::move(init)), clamped_(clamped), scope_(scope) {
  model.check_shape(theta);
  const auto& net = model.network();
  if (config_.size() != net.num_nodes())
    throw Error(ErrorCode::DimensionMismatch, "configuration length differs from node count");
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (clamped_ && net.is_labeled(v)) config_[v] = net.label(v);
    if (config_[v] < 0 || config_[v] >= model.num_categories())
      throw Error(ErrorCode::InvalidArgument, "configuration entry out of range");
    if (scope_ == ProposalScope::AllNodes || !frozen(v)) sites_.push_back(v);
  }
  if (sites_.empty())
    throw Error(ErrorCode::NoProposableSite, "clamped chain has no unlabeled node to move");
  log_potential_ = model.log_potential(theta, config_);
}

Proposal ChainState::propose(CounterRng& rng) const {
  const auto c = static_cast<std::uint64_t>(model_->num_categories());
  if (c < 2) throw Error(ErrorCode::InvalidArgument, "proposals need at least two categories");
  const NodeId v = sites_[rng.uniform_index(sites_.size())];
  auto k = static_cast<CategoryId>(rng.uniform_index(c - 1));
  if (k >= config_[v]) ++k;
  return {v, k};
}

StepOutcome ChainState::step(const ParameterVector& theta, CounterRng& rng) {
  const auto p = propose(rng);
  StepOutcome out{false, p.node, config_[p.node], p.category, 0.0};
  if (frozen(p.node)) return out;
  out.delta = delta(theta, p.node, p.category);
  if (accept_move(out.delta, rng)) {
    out.accepted = true;
    apply(theta, p.node, p.category, out.delta);
  }
  return out;
}

bool ChainState::try_move(const ParameterVector& theta, NodeId v, CategoryId k, CounterRng& rng) {
  if (frozen(v) || config_[v] == k) return false;
  const double d = delta(theta, v, k);
  if (!accept_move(d, rng)) return false;
  apply(theta, v, k, d);
  return true;
}

void ChainState::apply(const ParameterVector& theta, NodeId v, CategoryId k, double delta) {
  config_[v] = k;
  log_potential_ += delta;
  if (++since_refresh_ >= kRefreshInterval) refresh(theta);
}

void ChainState::refresh(const ParameterVector& theta) {
  log_potential_ = model_->log_potential(theta, config_);
  since_refresh_ = 0;
}

LabelConfiguration random_configuration(const FactorModel& model, bool clamp_labels,
                                        CounterRng& rng) {
  const auto& net = model.network();
  const auto c = static_cast<std::uint64_t>(model.num_categories());
  LabelConfiguration config(net.num_nodes());
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    config[v] = clamp_labels && net.is_labeled(v) ? net.label(v)
                                                  : static_cast<CategoryId>(rng.uniform_index(c));
  return config;
}

LabelConfiguration sample_map(const FactorModel& model, const ParameterVector& theta,
                              LabelConfiguration init, std::uint64_t steps, CounterRng& rng) {
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "sample_map needs at least one step");
  const auto& net = model.network();
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    if (net.is_labeled(v)) init[v] = net.label(v);
  if (model.num_categories() < 2 || net.num_labeled() == net.num_nodes()) return init;

  ChainState chain(model, theta, std::move(init), true);
  LabelConfiguration best = chain.config();
  double best_lp = chain.log_potential();
  // best + pending moves = current chain state
  std::vector<Proposal> pending;
  for (std::uint64_t t = 0; t < steps; ++t) {
    const auto outcome = chain.step(theta, rng);
    if (!outcome.accepted) continue;
    pending.push_back({outcome.node, outcome.new_category});
    if (chain.log_potential() > best_lp) {
      best_lp = chain.log_potential();
      for (const auto& move : pending) best[move.node] = move.category;
      pending.clear();
    }
  }
  return best;
}

}  // namespace ssfgm
