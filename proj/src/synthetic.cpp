#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "ssfgm/error.hpp"
#include "ssfgm/evaluation.hpp"
#include "ssfgm/rng.hpp"

namespace ssfgm {

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (nodes < 1) fail("synthetic network needs at least one node");
  if (categories < 1) fail("synthetic network needs at least one category");
  if (!(p_same >= 0.0 && p_same <= 1.0)) fail("p_same must be in [0,1]");
  if (!(mean_degree >= 0.0) || !std::isfinite(mean_degree)) fail("mean_degree must be >= 0");
  if (!std::isfinite(feature_signal)) fail("feature_signal must be finite");
  if (!(labeled_fraction > 0.0 && labeled_fraction <= 1.0)) fail("labeled_fraction must be in (0,1]");
}

Network generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t n = spec.nodes;
  const std::size_t c = spec.categories;
  const std::size_t d = spec.feature_dim > 0 ? spec.feature_dim : c;
  const CounterRng root(spec.seed);

  auto category_rng = root.split(1);
  std::vector<CategoryId> truth(n);
  std::vector<std::vector<NodeId>> members(c);
  for (NodeId v = 0; v < n; ++v) {
    truth[v] = static_cast<CategoryId>(category_rng.uniform_index(c));
    members[static_cast<std::size_t>(truth[v])].push_back(v);
  }

  auto edge_rng = root.split(2);
  const auto target = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.mean_degree / 2.0));
  const std::size_t max_edges = n * (n - 1) / 2;
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<Edge> edges;
  edges.reserve(std::min(target, max_edges));
  const std::size_t max_attempts = 100 * target + 1000;
  for (std::size_t attempt = 0; edges.size() < std::min(target, max_edges) && attempt < max_attempts; ++attempt) {
    const auto u = static_cast<NodeId>(edge_rng.uniform_index(n));
    auto partner = static_cast<std::size_t>(truth[u]);
    if (c > 1 && !edge_rng.bernoulli(spec.p_same)) {
      partner = static_cast<std::size_t>(edge_rng.uniform_index(c - 1));
      if (partner >= static_cast<std::size_t>(truth[u])) ++partner;
    }
    const auto& pool = members[partner];
    if (pool.empty()) continue;
    const NodeId v = pool[edge_rng.uniform_index(pool.size())];
    if (u == v) continue;
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) continue;
    edges.push_back({std::min(u, v), std::max(u, v), EdgeKind::Undirected});
  }

  auto feature_rng = root.split(3);
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (NodeId v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < d; ++j) features(v, static_cast<Eigen::Index>(j)) = feature_rng.normal();
    features(v, static_cast<Eigen::Index>(static_cast<std::size_t>(truth[v]) % d)) += spec.feature_signal;
  }

  auto label_rng = root.split(4);
  std::vector<NodeId> order(n);
  for (NodeId v = 0; v < n; ++v) order[v] = v;
  label_rng.shuffle(std::span<NodeId>(order));
  const auto labeled = std::max<std::size_t>(
      1, std::min(n, static_cast<std::size_t>(std::llround(spec.labeled_fraction * static_cast<double>(n)))));
  std::vector<CategoryId> labels(n, kUnlabeled);
  for (std::size_t i = 0; i < labeled; ++i) labels[order[i]] = truth[order[i]];

  // Zero-padded names keep sorted order equal to id order.
  const std::size_t digits = std::to_string(c > 1 ? c - 1 : 0).size();
  std::vector<std::string> category_names;
  for (std::size_t k = 0; k < c; ++k) {
    std::string id = std::to_string(k);
    category_names.push_back("c" + std::string(digits - id.size(), '0') + id);
  }
  std::vector<std::string> node_names;
  node_names.reserve(n);
  for (NodeId v = 0; v < n; ++v) node_names.push_back("u" + std::to_string(v));
  return Network(std::move(node_names), std::move(features), std::move(edges), std::move(labels),
                 std::move(category_names));
}

}  // namespace ssfgm
