#pragma once

#include "ssfgm/factor_model.hpp"

namespace ssfgm {

/// Exact quantities obtained by enumerating every configuration.
struct ExactSummary {
  double log_z = 0.0;              // log sum_Y exp(theta . S(Y))
  double log_z_conditional = 0.0;  // same sum restricted to Y consistent with the labels
  Matrix node_marginals;           // N x C, conditional when enumerated with clamping
  SufficientStatistics expected_stats_model;  // E_{p(Y|G)} S
  SufficientStatistics expected_stats_data;   // E_{p(Y|Y^L,G)} S
  LabelConfiguration map_config;              // argmax, conditional when clamping
  double map_log_potential = 0.0;
};

inline constexpr double kMaxEnumeratedConfigurations = 1e7;

/// Brute force over all C^N configurations in lexicographic order with
/// incremental updates per changed digit. Throws InstanceTooLarge above
/// kMaxEnumeratedConfigurations.
ExactSummary enumerate(const FactorModel& model, const ParameterVector& theta, bool clamp_labels);

/// E_{p(Y|Y^L,G)} S - E_{p(Y|G)} S, the gradient of the log marginal
/// likelihood of the labels present in the model's network.
SufficientStatistics exact_gradient(const FactorModel& model, const ParameterVector& theta);

/// log p(Y^L | G) = log_z_conditional - log_z.
double exact_log_likelihood(const FactorModel& model, const ParameterVector& theta);

}  // namespace ssfgm
