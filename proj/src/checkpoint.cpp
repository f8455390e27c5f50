#include "ssfgm/checkpoint.hpp"

#include <nlohmann/json.hpp>

#include "ssfgm/error.hpp"
#include "text_io.hpp"

namespace ssfgm {

using nlohmann::json;

namespace {

constexpr int kCheckpointVersion = 1;

StopReason parse_stop_reason(const std::string& text) {
  for (auto r : {StopReason::EarlyStopped, StopReason::MaxIterations, StopReason::Converged})
    if (to_string(r) == text) return r;
  throw Error(ErrorCode::SchemaMismatch, "unknown stop reason '" + text + "'");
}

}  // namespace

void to_json(json& j, const LearnerConfig& c) {
  j = json{{"learner", std::string(to_string(c.learner))},
           {"eta", c.eta},
           {"batch_size", c.batch_size},
           {"delta", c.delta},
           {"epsilon", c.epsilon},
           {"max_iterations", c.max_iterations},
           {"seed", c.seed},
           {"workers", c.workers},
           {"lbp_outer_iterations", c.lbp_outer_iterations},
           {"lbp_max_sweeps", c.lbp_max_sweeps},
           {"lbp_message_tolerance", c.lbp_message_tolerance},
           {"lbp_damping", c.lbp_damping},
           {"gradient_tolerance", c.gradient_tolerance},
           {"sr_l2", c.sr_l2},
           {"sr_max_rounds", c.sr_max_rounds},
           {"sr_max_solver_iterations", c.sr_max_solver_iterations},
           {"icm_sweeps", c.icm_sweeps}};
}

void from_json(const json& j, LearnerConfig& c) {
  c.learner = parse_learner(j.at("learner").get<std::string>());
  j.at("eta").get_to(c.eta);
  j.at("batch_size").get_to(c.batch_size);
  j.at("delta").get_to(c.delta);
  j.at("epsilon").get_to(c.epsilon);
  j.at("max_iterations").get_to(c.max_iterations);
  j.at("seed").get_to(c.seed);
  j.at("workers").get_to(c.workers);
  j.at("lbp_outer_iterations").get_to(c.lbp_outer_iterations);
  j.at("lbp_max_sweeps").get_to(c.lbp_max_sweeps);
  j.at("lbp_message_tolerance").get_to(c.lbp_message_tolerance);
  j.at("lbp_damping").get_to(c.lbp_damping);
  j.at("gradient_tolerance").get_to(c.gradient_tolerance);
  j.at("sr_l2").get_to(c.sr_l2);
  j.at("sr_max_rounds").get_to(c.sr_max_rounds);
  j.at("sr_max_solver_iterations").get_to(c.sr_max_solver_iterations);
  j.at("icm_sweeps").get_to(c.icm_sweeps);
}

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& file) {
  json j{{"format", "ssfgm-checkpoint"},
         {"version", kCheckpointVersion},
         {"categories", ck.categories},
         {"params", ck.params},
         {"deep", ck.deep ? json(*ck.deep) : json(nullptr)},
         {"config", ck.config},
         {"split", {ck.fractions.train, ck.fractions.validation, ck.fractions.test}},
         {"split_seed", ck.split_seed},
         {"min_category_count", ck.min_category_count},
         {"best_val_acc", ck.best_val_acc},
         {"stop_reason", std::string(to_string(ck.stop_reason))}};
  auto out = detail::open_output(file);
  out << j.dump(1) << '\n';
  if (!out) throw Error(ErrorCode::Io, "failed writing " + file.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  auto in = detail::open_input(file);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedRow, file.string() + ": " + e.what());
  }
  try {
    if (j.at("format") != "ssfgm-checkpoint") throw Error(ErrorCode::SchemaMismatch, "not a checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw Error(ErrorCode::SchemaMismatch, "unsupported checkpoint version");
    Checkpoint ck;
    ck.categories = j.at("categories").get<std::vector<std::string>>();
    j.at("params").get_to(ck.params);
    if (!j.at("deep").is_null()) ck.deep = j.at("deep").get<DeepNet>();
    j.at("config").get_to(ck.config);
    const auto split = j.at("split").get<std::vector<double>>();
    if (split.size() != 3) throw Error(ErrorCode::SchemaMismatch, "split must have three fractions");
    ck.fractions = {split[0], split[1], split[2]};
    j.at("split_seed").get_to(ck.split_seed);
    j.at("min_category_count").get_to(ck.min_category_count);
    j.at("best_val_acc").get_to(ck.best_val_acc);
    ck.stop_reason = parse_stop_reason(j.at("stop_reason").get<std::string>());
    if (ck.params.shape().categories != ck.categories.size())
      throw Error(ErrorCode::DimensionMismatch, "parameter shape disagrees with the category list");
    return ck;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaMismatch, file.string() + ": " + e.what());
  }
}

void write_history_csv(const TrainingRun& run, const std::filesystem::path& file) {
  auto out = detail::open_output(file);
  out << "iteration,train_acc,val_acc,log_potential_proxy\n";
  for (const auto& h : run.history)
    out << h.iteration << ',' << detail::format_double(h.train_acc) << ','
        << detail::format_double(h.val_acc) << ',' << detail::format_double(h.log_potential_proxy)
        << '\n';
  if (!out) throw Error(ErrorCode::Io, "failed writing " + file.string());
}

}  // namespace ssfgm
