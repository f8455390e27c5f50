#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssfgm/deep_net.hpp"
#include "ssfgm/learning.hpp"
#include "ssfgm/params.hpp"

namespace ssfgm {

/// Everything `predict` needs in one file: parameters, the frozen deep net,
/// the category dictionary and the settings that reproduce the label split.
struct Checkpoint {
  ParameterVector params;
  std::optional<DeepNet> deep;
  std::vector<std::string> categories;
  LearnerConfig config;
  SplitFractions fractions{};
  std::uint64_t split_seed = 1;
  std::size_t min_category_count = 10;
  double best_val_acc = 0.0;
  StopReason stop_reason = StopReason::MaxIterations;
};

void to_json(nlohmann::json& j, const LearnerConfig& config);
void from_json(const nlohmann::json& j, LearnerConfig& config);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& file);
Checkpoint load_checkpoint(const std::filesystem::path& file);

/// CSV with header `iteration,train_acc,val_acc,log_potential_proxy`.
void write_history_csv(const TrainingRun& run, const std::filesystem::path& file);

}  // namespace ssfgm
