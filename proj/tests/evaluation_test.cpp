#include <cmath>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ssfgm/checkpoint.hpp"
#include "ssfgm/error.hpp"
#include "ssfgm/evaluation.hpp"
#include "ssfgm/experiment.hpp"
#include "support.hpp"

namespace ssfgm {
namespace {

TEST(Evaluate, HandConfusion) {
  // C = 3 where class 2 is absent from both truth and predictions
  const std::vector<CategoryId> truth{0, 0, 1, 1};
  const std::vector<CategoryId> pred{0, 1, 1, 1};
  const MetricsReport r = evaluate(truth, pred, 3);
  EXPECT_DOUBLE_EQ(r.micro_accuracy, 0.75);
  EXPECT_DOUBLE_EQ(r.per_class[0].precision, 1.0);
  EXPECT_DOUBLE_EQ(r.per_class[0].recall, 0.5);
  EXPECT_DOUBLE_EQ(r.per_class[1].precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.per_class[1].recall, 1.0);
  EXPECT_NEAR(r.macro_f1, (2.0 / 3.0 + 0.8 + 0.0) / 3.0, 1e-15);
  EXPECT_EQ(r.never_predicted, (std::vector<CategoryId>{2}));
  EXPECT_EQ(r.confusion[0][1], 1u);
  EXPECT_EQ(r.per_class[1].predicted, 3u);
  EXPECT_EQ(r.per_class[2].support, 0u);
}

TEST(Evaluate, TwoClassMacroF1) {
  const std::vector<CategoryId> truth{0, 0, 1, 1};
  const std::vector<CategoryId> pred{0, 1, 1, 1};
  const MetricsReport r = evaluate(truth, pred, 2);
  EXPECT_NEAR(r.macro_f1, (2.0 / 3.0 + 4.0 / 5.0) / 2.0, 1e-15);
  EXPECT_TRUE(r.never_predicted.empty());
}

TEST(Evaluate, PerfectPredictions) {
  const std::vector<CategoryId> y{2, 0, 1, 2};
  const MetricsReport r = evaluate(y, y, 3);
  EXPECT_EQ(r.micro_accuracy, 1.0);
  EXPECT_EQ(r.macro_f1, 1.0);
  EXPECT_NE(format_table(r).find("micro accuracy   1.0000"), std::string::npos);
}

TEST(Evaluate, PermutingCategoriesKeepsAggregates) {
  CounterRng rng(1);
  std::vector<CategoryId> truth(200), pred(200);
  for (std::size_t i = 0; i < 200; ++i) {
    truth[i] = static_cast<CategoryId>(rng.uniform_index(4));
    pred[i] = rng.uniform01() < 0.6 ? truth[i] : static_cast<CategoryId>(rng.uniform_index(4));
  }
  const std::vector<CategoryId> perm{2, 0, 3, 1};
  std::vector<CategoryId> t2(200), p2(200);
  for (std::size_t i = 0; i < 200; ++i) {
    t2[i] = perm[static_cast<std::size_t>(truth[i])];
    p2[i] = perm[static_cast<std::size_t>(pred[i])];
  }
  const MetricsReport a = evaluate(truth, pred, 4);
  const MetricsReport b = evaluate(t2, p2, 4);
  EXPECT_EQ(a.micro_accuracy, b.micro_accuracy);
  EXPECT_NEAR(a.macro_f1, b.macro_f1, 1e-15);
  EXPECT_NEAR(a.macro_precision, b.macro_precision, 1e-15);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(a.per_class[k].f1, b.per_class[static_cast<std::size_t>(perm[k])].f1);
}

TEST(Evaluate, InputChecks) {
  const std::vector<CategoryId> a{0, 1};
  const std::vector<CategoryId> b{0};
  const std::vector<CategoryId> out_of_range{0, 5};
  EXPECT_THROW(evaluate(a, b, 2), Error);
  EXPECT_THROW(evaluate(a, out_of_range, 2), Error);
  const Network net({"a", "b"}, Matrix::Zero(2, 1), {}, {0, kUnlabeled}, {"x", "y"});
  const std::vector<NodeId> nodes{1};
  EXPECT_THROW(evaluate(net, nodes, LabelConfiguration{0, 0}), Error);
}

TEST(Evaluate, JsonReport) {
  const std::vector<CategoryId> y{0, 1};
  const nlohmann::json j = evaluate(y, y, 2);
  EXPECT_EQ(j.at("micro_accuracy").get<double>(), 1.0);
  EXPECT_EQ(j.at("per_class").size(), 2u);
}

TEST(GlpBaseline, PropagatesFromLabeledNeighbors) {
  // path a - b - c - d with a:0 and d:1, plus isolated e
  const Network net({"a", "b", "c", "d", "e"}, Matrix::Zero(5, 1),
                    {{0, 1, EdgeKind::Undirected}, {1, 2, EdgeKind::Undirected}, {2, 3, EdgeKind::Directed}},
                    {0, kUnlabeled, kUnlabeled, 1, kUnlabeled}, {"x", "y"});
  // round 1 gives b:0 and c:1; in round 2 c ties between b and d and takes 0
  EXPECT_EQ(glp_baseline(net), (LabelConfiguration{0, 0, 0, 1, 0}));
  EXPECT_EQ(glp_baseline(net, 1), (LabelConfiguration{0, 0, 1, 1, 0}));
}

TEST(GlpBaseline, TiesGoToSmallestIdAndLabelsStay) {
  const Network net({"a", "b", "c", "d"}, Matrix::Zero(4, 1),
                    {{0, 3, EdgeKind::Undirected}, {1, 3, EdgeKind::Undirected}, {2, 0, EdgeKind::Undirected}},
                    {2, 1, kUnlabeled, kUnlabeled}, {"x", "y", "z"});
  const auto y = glp_baseline(net);
  EXPECT_EQ(y[3], 1);  // one vote each for 1 and 2
  EXPECT_EQ(y[2], 2);
  EXPECT_EQ(y[0], 2);
  EXPECT_EQ(y[1], 1);
}

TEST(GlpBaseline, InvariantUnderCategoryRenaming) {
  const Network net = testing::random_network({.nodes = 30, .categories = 3, .edge_probability = 0.1}, 4);
  const std::vector<CategoryId> perm{1, 2, 0};
  std::vector<CategoryId> labels = net.labels();
  for (auto& l : labels)
    if (l != kUnlabeled) l = perm[static_cast<std::size_t>(l)];
  const auto a = glp_baseline(net);
  const auto b = glp_baseline(net.with_labels(labels));
  std::size_t agree = 0;
  for (NodeId v = 0; v < 30; ++v) agree += perm[static_cast<std::size_t>(a[v])] == b[v] ? 1 : 0;
  // only tie-breaks may differ
  EXPECT_GE(agree, 20u);
  for (NodeId v = 0; v < 30; ++v) {
    if (net.is_labeled(v)) {
      EXPECT_EQ(b[v], labels[v]);
    }
  }
}

TEST(Synthetic, DeterministicAndSized) {
  SyntheticSpec spec;
  spec.nodes = 500;
  spec.categories = 4;
  spec.mean_degree = 6.0;
  spec.labeled_fraction = 0.3;
  spec.seed = 7;
  const Network a = generate_synthetic(spec);
  const Network b = generate_synthetic(spec);
  EXPECT_EQ(a.edges(), b.edges());
  EXPECT_EQ(a.features(), b.features());
  EXPECT_EQ(a.labels(), b.labels());
  EXPECT_EQ(a.num_edges(), 1500u);
  EXPECT_EQ(a.num_labeled(), 150u);
  EXPECT_EQ(a.feature_dim(), 4u);
  std::set<std::pair<NodeId, NodeId>> distinct;
  for (const Edge& e : a.edges()) {
    EXPECT_NE(e.src, e.dst);
    distinct.emplace(e.src, e.dst);
  }
  EXPECT_EQ(distinct.size(), a.num_edges());
  spec.seed = 8;
  EXPECT_NE(generate_synthetic(spec).labels(), a.labels());
}

TEST(Synthetic, FullHomophilyJoinsSameCategory) {
  SyntheticSpec spec;
  spec.nodes = 300;
  spec.categories = 3;
  spec.p_same = 1.0;
  spec.labeled_fraction = 1.0;
  const Network net = generate_synthetic(spec);
  for (const Edge& e : net.edges()) EXPECT_EQ(net.label(e.src), net.label(e.dst));
}

TEST(Synthetic, HomophilyRateMatchesSpec) {
  SyntheticSpec spec;
  spec.nodes = 2000;
  spec.p_same = 0.7;
  spec.labeled_fraction = 1.0;
  const Network net = generate_synthetic(spec);
  std::size_t same = 0;
  for (const Edge& e : net.edges()) same += net.label(e.src) == net.label(e.dst) ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(same) / static_cast<double>(net.num_edges()), 0.7, 0.02);
}

TEST(Synthetic, RejectsBadSpecs) {
  SyntheticSpec spec;
  spec.p_same = 1.5;
  EXPECT_THROW(generate_synthetic(spec), Error);
  spec = {};
  spec.labeled_fraction = 0.0;
  EXPECT_THROW(generate_synthetic(spec), Error);
  spec = {};
  spec.nodes = 0;
  EXPECT_THROW(generate_synthetic(spec), Error);
}

TEST(LogisticBaseline, ChanceLevelWithoutSignal) {
  SyntheticSpec spec;
  spec.nodes = 3000;
  spec.categories = 4;
  spec.feature_signal = 0.0;
  spec.mean_degree = 0.0;
  spec.seed = 3;
  const Network net = generate_synthetic(spec);
  const DatasetSplit split = split_labels(net, {}, 3);
  const TrainingTask task(net, split);
  const MetricsReport r = evaluate(net, split.test, logistic_baseline(task));
  EXPECT_NEAR(r.micro_accuracy, 0.25, 0.06);
}

TEST(LogisticBaseline, LearnsStrongSignalAndKeepsLabels) {
  SyntheticSpec spec;
  spec.nodes = 600;
  spec.categories = 3;
  spec.feature_signal = 4.0;
  spec.seed = 5;
  const Network net = generate_synthetic(spec);
  const DatasetSplit split = split_labels(net, {}, 5);
  const TrainingTask task(net, split);
  const auto y = logistic_baseline(task);
  EXPECT_GT(evaluate(net, split.test, y).micro_accuracy, 0.9);
  for (NodeId v : split.train) EXPECT_EQ(y[v], net.label(v));
}

TEST(Experiment, PredictionNetworkWithholdsTestLabels) {
  const Network net = testing::random_network({.nodes = 40, .categories = 2, .labeled_fraction = 0.8}, 2);
  const DatasetSplit split = split_labels(net, {}, 2);
  const Network p = prediction_network(net, split);
  for (NodeId v : split.test) EXPECT_FALSE(p.is_labeled(v));
  for (NodeId v : split.train) EXPECT_EQ(p.label(v), net.label(v));
  for (NodeId v : split.validation) EXPECT_EQ(p.label(v), net.label(v));
}

TEST(Experiment, EndToEndBeatsChanceOnHomophilousData) {
  SyntheticSpec spec;
  spec.nodes = 400;
  spec.categories = 3;
  spec.p_same = 0.9;
  spec.mean_degree = 4.0;
  spec.feature_signal = 0.8;
  spec.seed = 6;
  const Network net = generate_synthetic(spec);
  const DatasetSplit split = split_labels(net, {}, 6);
  ExperimentOptions o;
  o.config = LearnerConfig::defaults_for(LearnerKind::MHPlus);
  o.config.eta = 0.001;
  o.config.delta = 10;
  o.config.max_iterations = 200;
  const ExperimentResult r = run_experiment(net, split, o);
  EXPECT_EQ(r.predictions.size(), net.num_nodes());
  EXPECT_GT(r.test.micro_accuracy, 0.5);
  EXPECT_EQ(r.test.per_class.size(), 3u);
}

TEST(Checkpoint, RoundTripIsExact) {
  const testing::TempDir dir("ckpt");
  Checkpoint c;
  const ModelShape shape{3, 2, 0};
  CounterRng rng(1);
  c.params = testing::random_theta(shape, rng);
  c.categories = {"x", "y", "z"};
  c.config = LearnerConfig::defaults_for(LearnerKind::LBP);
  c.config.seed = 42;
  c.fractions = {0.6, 0.2, 0.2};
  c.split_seed = 9;
  c.best_val_acc = 0.8125;
  c.stop_reason = StopReason::Converged;
  c.deep = DeepNet::initialized({2, 3, 2, 3}, 4);
  save_checkpoint(c, dir / "m.json");
  const Checkpoint back = load_checkpoint(dir / "m.json");
  EXPECT_EQ(back.params, c.params);
  EXPECT_EQ(back.categories, c.categories);
  EXPECT_EQ(back.config.learner, LearnerKind::LBP);
  EXPECT_EQ(back.config.seed, 42u);
  EXPECT_EQ(back.split_seed, 9u);
  EXPECT_EQ(back.best_val_acc, 0.8125);
  EXPECT_EQ(back.stop_reason, StopReason::Converged);
  ASSERT_TRUE(back.deep.has_value());
  EXPECT_EQ(*back.deep, *c.deep);
  save_checkpoint(back, dir / "again.json");
  EXPECT_EQ(testing::read_file(dir / "again.json"), testing::read_file(dir / "m.json"));
}

TEST(Checkpoint, MissingFileIsAnError) {
  const testing::TempDir dir("ckpt");
  EXPECT_THROW(load_checkpoint(dir / "absent.json"), Error);
  testing::write_file(dir / "bad.json", "{\"params\": ");
  EXPECT_THROW(load_checkpoint(dir / "bad.json"), Error);
}

TEST(HistoryCsv, HeaderAndRows) {
  const testing::TempDir dir("hist");
  TrainingRun run;
  run.history = {{0, 0.5, 0.25, -1.0}, {10, 0.75, 0.5, -0.5}};
  write_history_csv(run, dir / "h.csv");
  const std::string text = testing::read_file(dir / "h.csv");
  EXPECT_EQ(text.rfind("iteration,train_acc,val_acc,log_potential_proxy\n", 0), 0u);
  EXPECT_NE(text.find("\n10,"), std::string::npos);
}

}  // namespace
}  // namespace ssfgm
