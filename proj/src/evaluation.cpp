#include "ssfgm/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ssfgm/error.hpp"

namespace ssfgm {

MetricsReport evaluate(std::span<const CategoryId> truth, std::span<const CategoryId> predicted,
                       std::size_t categories) {
  if (truth.size() != predicted.size())
    throw Error(ErrorCode::DimensionMismatch, "truth and prediction lengths differ");
  MetricsReport r;
  r.confusion.assign(categories, std::vector<std::size_t>(categories, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = truth[i];
    const auto p = predicted[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= categories ||
        static_cast<std::size_t>(p) >= categories)
      throw Error(ErrorCode::InvalidArgument, "category id out of range in evaluation");
    ++r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  std::size_t correct = 0;
  r.per_class.resize(categories);
  for (std::size_t k = 0; k < categories; ++k) {
    auto& m = r.per_class[k];
    correct += r.confusion[k][k];
    for (std::size_t j = 0; j < categories; ++j) {
      m.support += r.confusion[k][j];
      m.predicted += r.confusion[j][k];
    }
    const double tp = static_cast<double>(r.confusion[k][k]);
    m.precision = m.predicted > 0 ? tp / static_cast<double>(m.predicted) : 0.0;
    m.recall = m.support > 0 ? tp / static_cast<double>(m.support) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    if (m.predicted == 0) r.never_predicted.push_back(static_cast<CategoryId>(k));
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
  }
  if (categories > 0) {
    r.macro_precision /= static_cast<double>(categories);
    r.macro_recall /= static_cast<double>(categories);
    r.macro_f1 /= static_cast<double>(categories);
  }
  r.micro_accuracy = truth.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(truth.size());
  return r;
}

MetricsReport evaluate(const Network& truth_net, std::span<const NodeId> nodes,
                       const LabelConfiguration& predicted) {
  std::vector<CategoryId> truth;
  std::vector<CategoryId> pred;
  truth.reserve(nodes.size());
  pred.reserve(nodes.size());
  for (NodeId v : nodes) {
    if (!truth_net.is_labeled(v))
      throw Error(ErrorCode::InvalidArgument, "evaluation node " + truth_net.node_name(v) + " has no label");
    truth.push_back(truth_net.label(v));
    pred.push_back(predicted.at(v));
  }
  auto report = evaluate(truth, pred, truth_net.num_categories());
  report.category_names = truth_net.category_names();
  return report;
}

std::string format_table(const MetricsReport& r) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "micro accuracy   %.4f\nmacro precision  %.4f\nmacro recall     %.4f\nmacro F1         %.4f\n",
                r.micro_accuracy, r.macro_precision, r.macro_recall, r.macro_f1);
  out << buf << '\n';
  std::size_t width = 8;
  for (const auto& name : r.category_names) width = std::max(width, name.size());
  std::snprintf(buf, sizeof buf, "%-*s %9s %9s %9s %8s %9s\n", static_cast<int>(width), "category",
                "precision", "recall", "f1", "support", "predicted");
  out << buf;
  for (std::size_t k = 0; k < r.per_class.size(); ++k) {
    const auto& m = r.per_class[k];
    const std::string name = k < r.category_names.size() ? r.category_names[k] : std::to_string(k);
    std::snprintf(buf, sizeof buf, "%-*s %9.4f %9.4f %9.4f %8zu %9zu%s\n", static_cast<int>(width),
                  name.c_str(), m.precision, m.recall, m.f1, m.support, m.predicted,
                  m.predicted == 0 ? "  (never predicted)" : "");
    out << buf;
  }
  return out.str();
}

void to_json(nlohmann::json& j, const MetricsReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t k = 0; k < r.per_class.size(); ++k) {
    const auto& m = r.per_class[k];
    classes.push_back({{"category", k < r.category_names.size() ? r.category_names[k] : std::to_string(k)},
                       {"precision", m.precision},
                       {"recall", m.recall},
                       {"f1", m.f1},
                       {"support", m.support},
                       {"predicted", m.predicted}});
  }
  j = nlohmann::json{{"micro_accuracy", r.micro_accuracy},
                     {"macro_precision", r.macro_precision},
                     {"macro_recall", r.macro_recall},
                     {"macro_f1", r.macro_f1},
                     {"per_class", std::move(classes)},
                     {"confusion", r.confusion},
                     {"never_predicted", r.never_predicted}};
}

LabelConfiguration glp_baseline(const Network& net, std::size_t max_rounds) {
  const std::size_t c = net.num_categories();
  LabelConfiguration current = net.labels();
  std::vector<std::size_t> votes(c);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    LabelConfiguration next = current;
    bool changed = false;
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (net.is_labeled(v)) continue;
      std::fill(votes.begin(), votes.end(), 0);
      bool any = false;
      for (const auto& inc : net.incident(v)) {
        const CategoryId y = current[inc.neighbor];
        if (y == kUnlabeled) continue;
        ++votes[static_cast<std::size_t>(y)];
        any = true;
      }
      if (!any) continue;
      const auto best = static_cast<CategoryId>(std::max_element(votes.begin(), votes.end()) - votes.begin());
      if (best != next[v]) {
        next[v] = best;
        changed = true;
      }
    }
    current = std::move(next);
    if (!changed) break;
  }

  std::vector<std::size_t> counts(c, 0);
  for (CategoryId y : net.labels())
    if (y != kUnlabeled) ++counts[static_cast<std::size_t>(y)];
  const auto modal = c == 0 ? CategoryId{0}
                            : static_cast<CategoryId>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  for (auto& y : current)
    if (y == kUnlabeled) y = modal;
  return current;
}

LabelConfiguration logistic_baseline(const TrainingTask& task, double l2, int max_solver_iterations) {
  if (task.train_nodes().empty())
    throw Error(ErrorCode::NoTrainingLabels, "logistic baseline needs training labels");
  const FactorModel& model = task.model();
  const LabelConfiguration unused(model.num_nodes(), 0);
  const SoftmaxObjective objective(model, task.train_nodes(), unused, false, l2);
  ParameterVector start = task.head_init() ? *task.head_init() : ParameterVector(model.shape());
  const auto fit = fit_softmax(objective, std::move(start), max_solver_iterations);
  return unary_decode(model, fit.theta);
}

}  // namespace ssfgm
