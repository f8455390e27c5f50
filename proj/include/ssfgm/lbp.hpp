#pragma once

#include <vector>

#include "ssfgm/factor_model.hpp"

namespace ssfgm {

struct LbpOptions {
  int max_sweeps = 50;
  double tolerance = 1e-6;
  /// new = (1 - damping) * update + damping * old, in the log domain.
  double damping = 0.5;
};

/// Log-domain messages for every edge, two directions each. Entry
/// [2*e + side] addresses the message toward the edge's src (side 0) or dst
/// (side 1). Every message is shifted so its largest entry is 0.
struct MessageStore {
  std::size_t categories = 0;
  std::vector<double> to_factor;    // variable -> edge factor
  std::vector<double> to_variable;  // edge factor -> variable
  double max_residual = 0.0;

  std::span<double> factor_message(std::size_t slot) {
    return {to_variable.data() + slot * categories, categories};
  }
  std::span<const double> factor_message(std::size_t slot) const {
    return {to_variable.data() + slot * categories, categories};
  }
  std::span<double> variable_message(std::size_t slot) {
    return {to_factor.data() + slot * categories, categories};
  }
  std::span<const double> variable_message(std::size_t slot) const {
    return {to_factor.data() + slot * categories, categories};
  }
};

struct LbpResult {
  Matrix node_marginals;              // N x C
  std::vector<double> edge_marginals;  // |E| x C x C, [e][y_src][y_dst]
  bool converged = false;
  int sweeps = 0;
  double max_residual = 0.0;

  double edge_marginal(std::size_t e, CategoryId k, CategoryId l) const {
    const auto c = static_cast<std::size_t>(node_marginals.cols());
    return edge_marginals[(e * c + static_cast<std::size_t>(k)) * c + static_cast<std::size_t>(l)];
  }
};

/// Synchronous flooding sum-product. With `clamp_labels`, labeled nodes are
/// pinned to their label (delta node potentials).
LbpResult sum_product(const FactorModel& model, const ParameterVector& theta, bool clamp_labels,
                      const LbpOptions& options = {});

/// Same schedule with (max, +); per-node argmax of max-beliefs, ties to the
/// smallest category id.
LabelConfiguration max_sum_decode(const FactorModel& model, const ParameterVector& theta,
                                  bool clamp_labels, const LbpOptions& options = {});

/// Expected sufficient statistics assembled from node and edge marginals.
SufficientStatistics expected_statistics(const FactorModel& model, const LbpResult& marginals);

}  // namespace ssfgm
