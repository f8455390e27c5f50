#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "ssfgm/error.hpp"
#include "ssfgm/evaluation.hpp"
#include "ssfgm/exact_oracle.hpp"
#include "ssfgm/learning.hpp"
#include "ssfgm/mh.hpp"
#include "support.hpp"

namespace ssfgm {
namespace {

// Path 0-1-2-3 labeled 0,0,1,1 with a constant feature. Its likelihood has
// a finite maximizer.
Network finite_mle_path() {
  return Network({"a", "b", "c", "d"}, Matrix::Constant(4, 1, 1.0),
                 {{0, 1, EdgeKind::Undirected}, {1, 2, EdgeKind::Undirected}, {2, 3, EdgeKind::Undirected}},
                 {0, 0, 1, 1}, {"k0", "k1"});
}

DatasetSplit all_train(const Network& net) { return {net.labeled_nodes(), {}, {}}; }

// Plain gradient ascent on the exact log-likelihood.
ParameterVector oracle_mle(const FactorModel& model) {
  ParameterVector theta(model.shape());
  for (int it = 0; it < 200000; ++it) {
    const SufficientStatistics g = exact_gradient(model, theta);
    if (g.max_abs() < 1e-13) break;
    add_scaled(theta, g, 0.1);
  }
  return theta;
}

Network synthetic(std::uint64_t seed, std::size_t n = 300, double degree = 4.0) {
  SyntheticSpec spec;
  spec.nodes = n;
  spec.categories = 3;
  spec.p_same = 0.85;
  spec.mean_degree = degree;
  spec.feature_signal = 1.0;
  spec.seed = seed;
  return generate_synthetic(spec);
}

LearnerConfig quick(LearnerKind kind) {
  LearnerConfig c = LearnerConfig::defaults_for(kind);
  c.eta = kind == LearnerKind::LBP ? 0.05 : 0.001;
  c.batch_size = 2000;
  c.delta = 5;
  c.epsilon = 3;
  c.max_iterations = 60;
  c.lbp_outer_iterations = 20;
  return c;
}

TrainingRun run_learner(const TrainingTask& task, LearnerKind kind) { return train(task, quick(kind)); }

TEST(LearnerConfig, DefaultsAndValidation) {
  EXPECT_EQ(LearnerConfig::defaults_for(LearnerKind::MH).eta, 0.1);
  const LearnerConfig plus = LearnerConfig::defaults_for(LearnerKind::MHPlus);
  EXPECT_EQ(plus.eta, 1.0);
  EXPECT_EQ(plus.batch_size, 5000u);
  EXPECT_EQ(plus.delta, 1000u);
  EXPECT_EQ(plus.epsilon, 20u);
  LearnerConfig bad = plus;
  bad.eta = 0.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = plus;
  bad.batch_size = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = plus;
  bad.workers = 0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(LearnerConfig, ParseNames) {
  EXPECT_EQ(parse_learner("lbp"), LearnerKind::LBP);
  EXPECT_EQ(parse_learner("sr"), LearnerKind::SR);
  EXPECT_EQ(parse_learner("mh"), LearnerKind::MH);
  EXPECT_EQ(parse_learner("mh+"), LearnerKind::MHPlus);
  EXPECT_EQ(to_string(LearnerKind::MHPlus), "mh+");
  EXPECT_THROW(parse_learner("gibbs"), Error);
}

TEST(TrainingTask, SeesOnlyTrainingLabels) {
  const Network net = synthetic(1, 100);
  const DatasetSplit split = split_labels(net, {}, 1);
  const TrainingTask task(net, split);
  EXPECT_EQ(task.network().num_labeled(), split.train.size());
  for (NodeId v : split.test) EXPECT_FALSE(task.network().is_labeled(v));
  for (NodeId v : split.validation) EXPECT_FALSE(task.network().is_labeled(v));
  for (std::size_t i = 0; i < split.validation.size(); ++i)
    EXPECT_EQ(task.validation_label(i), net.label(split.validation[i]));
}

TEST(SoftmaxObjective, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Network net = testing::random_network(
        {.nodes = 12, .categories = 3, .features = 3, .edge_probability = 0.3, .directed_fraction = 0.4,
         .labeled_fraction = 0.7},
        seed);
    CounterRng rng(seed);
    Matrix hidden(12, 2);
    for (Eigen::Index i = 0; i < hidden.size(); ++i) hidden.data()[i] = rng.uniform01();
    const FactorModel model(net, hidden);
    const auto nodes = net.labeled_nodes();
    const auto config = testing::random_config(12, 3, rng);
    for (bool corr : {false, true}) {
      const SoftmaxObjective objective(model, nodes, config, corr, 0.3);
      ParameterVector theta = testing::random_theta(model.shape(), rng, 0.5);
      SufficientStatistics g(model.shape());
      const double value = objective.value_and_gradient(theta, g);
      EXPECT_NEAR(value, objective.value(theta), 1e-12);
      const double h = 1e-5;
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double keep = theta[i];
        theta[i] = keep + h;
        const double up = objective.value(theta);
        theta[i] = keep - h;
        const double down = objective.value(theta);
        theta[i] = keep;
        const double fd = (up - down) / (2 * h);
        if (i >= objective.num_active()) {
          EXPECT_EQ(g[i], 0.0);
          EXPECT_EQ(fd, 0.0);
          continue;
        }
        EXPECT_LE(std::abs(g[i] - fd), 1e-5 * std::max(1.0, std::abs(fd))) << "index " << i;
      }
    }
  }
}

TEST(SoftmaxObjective, SolverTraceNeverDecreases) {
  const Network net = synthetic(2, 200);
  const DatasetSplit split = split_labels(net, {}, 2);
  const TrainingTask task(net, split);
  const LabelConfiguration config = unary_decode(task.model(), ParameterVector(task.model().shape()));
  const SoftmaxObjective objective(task.model(), task.train_nodes(), config, true, 0.0);
  const SoftmaxFit fit = fit_softmax(objective, ParameterVector(task.model().shape()), 100);
  ASSERT_GE(fit.objective_trace.size(), 2u);
  for (std::size_t i = 1; i < fit.objective_trace.size(); ++i)
    EXPECT_GE(fit.objective_trace[i], fit.objective_trace[i - 1] - 1e-9);
  EXPECT_NEAR(fit.objective_trace.back(), objective.value(fit.theta), 1e-9);
}

TEST(TrainSr, EdgelessGraphIsLogisticRegression) {
  SyntheticSpec spec;
  spec.nodes = 300;
  spec.categories = 3;
  spec.mean_degree = 0.0;
  spec.seed = 4;
  const Network net = generate_synthetic(spec);
  const DatasetSplit split = split_labels(net, {}, 4);
  const TrainingTask task(net, split);
  const TrainingRun run = train_sr(task, LearnerConfig::defaults_for(LearnerKind::SR));
  for (std::size_t i = task.model().shape().directed_offset(); i < run.best_params.size(); ++i)
    EXPECT_EQ(run.best_params[i], 0.0);
  EXPECT_EQ(unary_decode(task.model(), run.best_params), logistic_baseline(task));
}

TEST(TrainSr, NeedsTrainingLabels) {
  const Network net = synthetic(3, 50);
  const DatasetSplit split{{}, {net.labeled_nodes()[0]}, {}};
  const TrainingTask task(net, split);
  try {
    train_sr(task, LearnerConfig::defaults_for(LearnerKind::SR));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoTrainingLabels);
  }
}

TEST(TrainSr, CorrelationRoundDoesNotLoseValidationAccuracy) {
  const Network net = synthetic(5, 400);
  const DatasetSplit split = split_labels(net, {}, 5);
  const TrainingTask task(net, split);
  const TrainingRun run = train_sr(task, LearnerConfig::defaults_for(LearnerKind::SR));
  ASSERT_GE(run.history.size(), 2u);
  EXPECT_GE(run.best_val_acc, run.history[0].val_acc);
  EXPECT_EQ(run.stop_reason, StopReason::Converged);
}

TEST(TrainLbp, GradientStepMatchesExactOnLabeledTree) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Network net = testing::random_network(
        {.nodes = 4, .categories = 3, .features = 2, .directed_fraction = 0.5, .labeled_fraction = 1.0, .tree = true},
        seed);
    const TrainingTask task(net, all_train(net));
    LearnerConfig config = LearnerConfig::defaults_for(LearnerKind::LBP);
    config.eta = 0.3;
    config.lbp_outer_iterations = 1;
    config.lbp_message_tolerance = 1e-14;
    config.lbp_max_sweeps = 500;
    config.gradient_tolerance = 0.0;
    CounterRng rng(seed);
    ParameterVector theta = testing::random_theta(task.model().shape(), rng, 0.5);
    for (int iteration = 0; iteration < 3; ++iteration) {
      const TrainingRun run = train_lbp(task, config, &theta);
      const SufficientStatistics exact = exact_gradient(task.model(), theta);
      for (std::size_t i = 0; i < theta.size(); ++i)
        EXPECT_NEAR((run.final_params[i] - theta[i]) / config.eta, exact[i], 1e-6);
      theta = run.final_params;
    }
  }
}

TEST(TrainLbp, ConvergedAtOracleMle) {
  const Network net = finite_mle_path();
  const TrainingTask task(net, all_train(net));
  const ParameterVector mle = oracle_mle(task.model());
  ASSERT_LT(exact_gradient(task.model(), mle).max_abs(), 1e-12);
  EXPECT_NEAR(mle.gamma(EdgeKind::Undirected, 0, 1) - mle.gamma(EdgeKind::Undirected, 0, 0), -std::log(2.0), 1e-9);
  LearnerConfig config = LearnerConfig::defaults_for(LearnerKind::LBP);
  config.lbp_message_tolerance = 1e-14;
  config.lbp_max_sweeps = 500;
  const TrainingRun run = train_lbp(task, config, &mle);
  EXPECT_EQ(run.stop_reason, StopReason::Converged);
  EXPECT_EQ(run.final_params, mle);
}

TEST(TrainLbp, SingleCategoryConvergesImmediately) {
  const Network net = testing::random_network({.nodes = 6, .categories = 1, .edge_probability = 0.5, .labeled_fraction = 0.5}, 2);
  const TrainingTask task(net, all_train(net));
  const TrainingRun run = train_lbp(task, LearnerConfig::defaults_for(LearnerKind::LBP));
  EXPECT_EQ(run.stop_reason, StopReason::Converged);
  EXPECT_EQ(run.final_params.max_abs(), 0.0);
}

TEST(TrainMhPlus, OracleModeReachesMle) {
  const Network net = finite_mle_path();
  const TrainingTask task(net, all_train(net));
  const double best = exact_log_likelihood(task.model(), oracle_mle(task.model()));
  LearnerConfig config = LearnerConfig::defaults_for(LearnerKind::MHPlus);
  config.oracle_gradient = true;
  config.eta = 0.1;
  config.max_iterations = 3000;
  config.delta = 1000;
  config.epsilon = 100;
  const TrainingRun run = train_mh_plus(task, config);
  EXPECT_LT(best - exact_log_likelihood(task.model(), run.final_params), 1e-3);
}

TEST(TrainMhPlus, OracleModeOnRandomSmallInstances) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Network base = testing::random_network(
        {.nodes = 5, .categories = 2, .features = 1, .edge_probability = 0.6, .labeled_fraction = 1.0}, seed);
    // a constant feature keeps the likelihood bounded when labels repeat
    const Network net(base.node_names(), Matrix::Constant(5, 1, 1.0), base.edges(), base.labels(),
                      base.category_names());
    const TrainingTask task(net, all_train(net));
    const ParameterVector mle = oracle_mle(task.model());
    if (exact_gradient(task.model(), mle).max_abs() > 1e-9) continue;  // maximizer at infinity
    LearnerConfig config = LearnerConfig::defaults_for(LearnerKind::MHPlus);
    config.oracle_gradient = true;
    config.eta = 0.1;
    config.max_iterations = 5000;
    config.delta = 5000;
    const TrainingRun run = train_mh_plus(task, config);
    EXPECT_LT(exact_log_likelihood(task.model(), mle) - exact_log_likelihood(task.model(), run.final_params), 1e-3);
  }
}

// Unbatched MH+ written out step by step.
ParameterVector reference_mh_plus(const TrainingTask& task, const LearnerConfig& config, std::size_t steps) {
  const FactorModel& model = task.model();
  ParameterVector theta = train_sr(task, config).best_params;
  CounterRng rng = CounterRng(config.seed).split(0x5eed0000ULL);
  ChainState data(model, theta, random_configuration(model, true, rng), true, ProposalScope::AllNodes);
  ChainState free(model, theta, random_configuration(model, false, rng), false, ProposalScope::AllNodes);
  for (std::size_t t = 0; t < steps; ++t) {
    const auto v = static_cast<NodeId>(rng.uniform_index(model.num_nodes()));
    const auto k = static_cast<CategoryId>(rng.uniform_index(static_cast<std::uint64_t>(model.num_categories())));
    const bool a1 = data.try_move(theta, v, k, rng);
    const bool a2 = free.try_move(theta, v, k, rng);
    if (!a1 && !a2) continue;
    SufficientStatistics g = model.local_statistics(data.config(), v);
    g -= model.local_statistics(free.config(), v);
    add_scaled(theta, g, config.eta);
  }
  return theta;
}

TEST(TrainMhPlus, BatchOfOneIsUnbatchedAscent) {
  const Network net = synthetic(7, 60);
  const DatasetSplit split = split_labels(net, {}, 7);
  const TrainingTask task(net, split);
  LearnerConfig config = LearnerConfig::defaults_for(LearnerKind::MHPlus);
  config.batch_size = 1;
  config.eta = 0.01;
  config.max_iterations = 3000;
  config.delta = 100000;
  config.seed = 9;
  const TrainingRun run = train_mh_plus(task, config);
  const ParameterVector expected = reference_mh_plus(task, config, 3000);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(run.final_params[i], expected[i], 1e-12);
}

// Unbatched MH written out step by step, with the update taken from
// global statistics.
ParameterVector reference_mh(const TrainingTask& task, const LearnerConfig& config, std::size_t steps) {
  const FactorModel& model = task.model();
  const Network& net = model.network();
  ParameterVector theta = train_sr(task, config).best_params;
  CounterRng rng = CounterRng(config.seed).split(0x5eed0000ULL);
  ChainState chain(model, theta, random_configuration(model, false, rng), false);
  for (std::size_t t = 0; t < steps; ++t) {
    const LabelConfiguration before = chain.config();
    const StepOutcome out = chain.step(theta, rng);
    if (!out.accepted || !net.is_labeled(out.node)) continue;
    const CategoryId truth = net.label(out.node);
    double sign = 0.0;
    if (out.new_category == truth && out.delta < 0.0) sign = 1.0;
    if (out.old_category == truth && out.delta > 0.0) sign = -1.0;
    if (sign == 0.0) continue;
    SufficientStatistics g = model.global_statistics(chain.config());
    g -= model.global_statistics(before);
    add_scaled(theta, g, sign * config.eta);
  }
  return theta;
}

TEST(TrainMh, BatchOfOneFollowsCorrectiveRule) {
  const Network net = synthetic(8, 40);
  const DatasetSplit split = split_labels(net, {}, 8);
  const TrainingTask task(net, split);
  LearnerConfig config = LearnerConfig::defaults_for(LearnerKind::MH);
  config.batch_size = 1;
  config.eta = 0.05;
  config.max_iterations = 2000;
  config.delta = 100000;
  config.seed = 3;
  const TrainingRun run = train_mh(task, config);
  const ParameterVector expected = reference_mh(task, config, 2000);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(run.final_params[i], expected[i], 1e-9);
}

TEST(TrainParallel, OneWorkerEqualsSerial) {
  const Network net = synthetic(9, 200);
  const DatasetSplit split = split_labels(net, {}, 9);
  const TrainingTask task(net, split);
  for (LearnerKind kind : {LearnerKind::MH, LearnerKind::MHPlus}) {
    LearnerConfig config = quick(kind);
    config.workers = 1;
    const TrainingRun serial = kind == LearnerKind::MH ? train_mh(task, config) : train_mh_plus(task, config);
    const TrainingRun parallel = train_parallel(task, config);
    EXPECT_EQ(serial.final_params, parallel.final_params);
    EXPECT_EQ(serial.best_params, parallel.best_params);
    EXPECT_EQ(serial.history.size(), parallel.history.size());
  }
}

TEST(TrainParallel, FixedSeedIsReproducibleWithWorkers) {
  const Network net = synthetic(10, 200);
  const DatasetSplit split = split_labels(net, {}, 10);
  const TrainingTask task(net, split);
  LearnerConfig config = quick(LearnerKind::MHPlus);
  config.workers = 4;
  config.batch_size = 2003;  // uneven shares
  const TrainingRun a = train_parallel(task, config);
  const TrainingRun b = train_parallel(task, config);
  EXPECT_EQ(a.final_params, b.final_params);
  EXPECT_EQ(a.best_params, b.best_params);
}

TEST(Learners, KeepUndirectedCorrelationSymmetric) {
  const Network net = synthetic(11, 150);
  const DatasetSplit split = split_labels(net, {}, 11);
  const TrainingTask task(net, split);
  for (LearnerKind kind : {LearnerKind::LBP, LearnerKind::SR, LearnerKind::MH, LearnerKind::MHPlus}) {
    const TrainingRun run = run_learner(task, kind);
    EXPECT_EQ(undirected_asymmetry(run.best_params), 0.0) << to_string(kind);
    EXPECT_EQ(undirected_asymmetry(run.final_params), 0.0) << to_string(kind);
    EXPECT_TRUE(run.best_params.all_finite());
  }
}

TEST(Learners, BestParamsHoldMaximumValidationAccuracy) {
  const Network net = synthetic(12, 300);
  const DatasetSplit split = split_labels(net, {}, 12);
  const TrainingTask task(net, split);
  for (LearnerKind kind : {LearnerKind::LBP, LearnerKind::SR, LearnerKind::MH, LearnerKind::MHPlus}) {
    const TrainingRun run = run_learner(task, kind);
    double top = 0.0;
    for (std::size_t i = 0; i < run.history.size(); ++i) {
      top = std::max(top, run.history[i].val_acc);
      if (i > 0) {
        EXPECT_GT(run.history[i].iteration, run.history[i - 1].iteration);
      }
    }
    EXPECT_EQ(run.best_val_acc, top) << to_string(kind);
    LabelConfiguration decoded;
    if (kind == LearnerKind::LBP) {
      const LbpOptions o{run.config.lbp_max_sweeps, run.config.lbp_message_tolerance, run.config.lbp_damping};
      decoded = max_sum_decode(task.model(), run.best_params, true, o);
    } else if (kind != LearnerKind::SR) {
      decoded = icm_decode(task.model(), run.best_params, unary_decode(task.model(), run.best_params),
                           run.config.icm_sweeps);
    }
    if (!decoded.empty()) {
      EXPECT_EQ(task.validation_accuracy(decoded), run.best_val_acc) << to_string(kind);
    }
  }
}

TEST(Learners, SamplingLearnersStartFromSoftmaxRegression) {
  const Network net = synthetic(13, 300);
  const DatasetSplit split = split_labels(net, {}, 13);
  const TrainingTask task(net, split);
  for (LearnerKind kind : {LearnerKind::MH, LearnerKind::MHPlus}) {
    const TrainingRun sr = train_sr(task, quick(kind));
    const TrainingRun run = run_learner(task, kind);
    EXPECT_GE(run.best_val_acc, run.history[0].val_acc);
    EXPECT_EQ(run.history[0].iteration, 0u);
    const LabelConfiguration init =
        icm_decode(task.model(), sr.best_params, unary_decode(task.model(), sr.best_params), 10);
    EXPECT_EQ(run.history[0].val_acc, task.validation_accuracy(init));
  }
}

TEST(Learners, EarlyStoppingCountsNonImprovingEvaluations) {
  const Network net = synthetic(14, 200);
  const DatasetSplit split = split_labels(net, {}, 14);
  const TrainingTask task(net, split);
  LearnerConfig config = quick(LearnerKind::MHPlus);
  config.delta = 1;
  config.epsilon = 2;
  config.max_iterations = 1000;
  const TrainingRun run = train_mh_plus(task, config);
  ASSERT_EQ(run.stop_reason, StopReason::EarlyStopped);
  std::size_t best_at = 0;
  for (std::size_t i = 0; i < run.history.size(); ++i)
    if (run.history[i].val_acc > run.history[best_at].val_acc) best_at = i;
  EXPECT_EQ(run.history.size() - 1 - best_at, config.epsilon);
}

TEST(Learners, MaxIterationsStopsSampling) {
  const Network net = synthetic(15, 100);
  const DatasetSplit split = split_labels(net, {}, 15);
  const TrainingTask task(net, split);
  LearnerConfig config = quick(LearnerKind::MH);
  config.max_iterations = 7;
  config.delta = 3;
  config.epsilon = 100;
  const TrainingRun run = train_mh(task, config);
  EXPECT_EQ(run.stop_reason, StopReason::MaxIterations);
  ASSERT_EQ(run.history.size(), 4u);  // 0, 3, 6 and the last iteration
  EXPECT_EQ(run.history.back().iteration, 7u);
}

TEST(Learners, NeverReadTestLabels) {
  const Network net = synthetic(16, 250);
  const DatasetSplit split = split_labels(net, {}, 16);
  std::vector<CategoryId> corrupted = net.labels();
  for (NodeId v : split.test) corrupted[v] = (corrupted[v] + 1) % static_cast<CategoryId>(net.num_categories());
  const Network tampered = net.with_labels(corrupted);
  const TrainingTask clean(net, split);
  const TrainingTask dirty(tampered, split);
  for (LearnerKind kind : {LearnerKind::LBP, LearnerKind::SR, LearnerKind::MH, LearnerKind::MHPlus}) {
    const TrainingRun a = run_learner(clean, kind);
    const TrainingRun b = run_learner(dirty, kind);
    EXPECT_EQ(a.best_params, b.best_params) << to_string(kind);
    EXPECT_EQ(a.final_params, b.final_params) << to_string(kind);
  }
}

TEST(Predict, MaxSumOnTreeIsOracleMap) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Network net = testing::random_network(
        {.nodes = 7, .categories = 3, .features = 2, .labeled_fraction = 0.3, .tree = true}, seed);
    const FactorModel model(net);
    CounterRng rng(seed);
    const ParameterVector theta = testing::random_theta(model.shape(), rng);
    PredictOptions o;
    o.method = PredictMethod::MaxSum;
    o.lbp.tolerance = 1e-14;
    o.lbp.max_sweeps = 500;
    EXPECT_EQ(predict(model, theta, o), enumerate(model, theta, true).map_config);
  }
}

TEST(Predict, MethodsAgreeOnPeakedModel) {
  const Network base = testing::random_network({.nodes = 6, .categories = 3, .edge_probability = 0.4}, 5);
  Matrix x = Matrix::Zero(6, 3);
  for (NodeId v = 0; v < 6; ++v) x(v, v % 3) = 1.0;
  const Network net(base.node_names(), x, base.edges(), base.labels(), base.category_names());
  const FactorModel model(net);
  ParameterVector theta(model.shape());
  for (CategoryId k = 0; k < 3; ++k) theta.alpha(k)[static_cast<std::size_t>(k)] = 20.0;
  PredictOptions ms;
  ms.method = PredictMethod::MaxSum;
  PredictOptions mh;
  mh.method = PredictMethod::MHSample;
  mh.steps = 10000;
  const auto a = predict(model, theta, ms);
  EXPECT_EQ(a, predict(model, theta, mh));
  EXPECT_EQ(a, enumerate(model, theta, true).map_config);
}

TEST(Predict, SingleCategoryHasOneConfiguration) {
  const Network net = testing::random_network({.nodes = 5, .categories = 1, .edge_probability = 0.5}, 1);
  const FactorModel model(net);
  for (PredictMethod m : {PredictMethod::MaxSum, PredictMethod::MHSample}) {
    PredictOptions o;
    o.method = m;
    EXPECT_EQ(predict(model, ParameterVector(model.shape()), o), LabelConfiguration(5, 0));
  }
}

TEST(Predict, DefaultPairing) {
  EXPECT_EQ(default_predictor(LearnerKind::LBP), PredictMethod::MaxSum);
  EXPECT_EQ(default_predictor(LearnerKind::SR), PredictMethod::MHSample);
  EXPECT_EQ(default_predictor(LearnerKind::MH), PredictMethod::MHSample);
  EXPECT_EQ(default_predictor(LearnerKind::MHPlus), PredictMethod::MHSample);
}

TEST(IcmDecode, ReachesLocalOptimumAndKeepsLabels) {
  const Network net = testing::random_network({.nodes = 15, .categories = 3, .edge_probability = 0.3}, 6);
  const FactorModel model(net);
  CounterRng rng(6);
  const ParameterVector theta = testing::random_theta(model.shape(), rng);
  const auto y = icm_decode(model, theta, testing::random_config(15, 3, rng), 1000);
  for (NodeId v = 0; v < 15; ++v) {
    if (net.is_labeled(v)) {
      EXPECT_EQ(y[v], net.label(v));
      continue;
    }
    for (CategoryId k = 0; k < 3; ++k) EXPECT_LE(model.delta_log_potential(theta, y, v, k), 0.0);
  }
}

}  // namespace
}  // namespace ssfgm
