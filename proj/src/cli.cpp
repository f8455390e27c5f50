#include "ssfgm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "ssfgm/checkpoint.hpp"
#include "ssfgm/error.hpp"
#include "ssfgm/evaluation.hpp"
#include "ssfgm/experiment.hpp"
#include "ssfgm/features.hpp"
#include "ssfgm/log.hpp"
#include "text_io.hpp"

namespace ssfgm {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GenerateFlags {
  SyntheticSpec spec;
  std::string out;
};

struct FeaturizeFlags {
  std::string raw, edges, out, schema, mean = "distinct", split = "0.5,0.1,0.4";
  FeaturizeOptions options;
};

struct LearnFlags {
  std::string learner = "mh+";
  double eta = 1.0;
  CLI::Option* eta_option = nullptr;
  std::size_t batch_size = 5000;
  std::size_t delta = 1000;
  std::size_t epsilon = 20;
  std::size_t max_iterations = 1000000;
  std::string split = "0.5,0.1,0.4";
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool deep = false;
  std::size_t min_category_count = 10;
  double sr_l2 = 0.0;
  std::size_t lbp_iterations = 100;
  int lbp_sweeps = 50;
  std::size_t hidden1 = 200;
  std::size_t hidden2 = 100;
  int deep_epochs = 100;
  double deep_lr = 0.01;

  LearnerConfig config(LearnerKind kind) const {
    LearnerConfig c = LearnerConfig::defaults_for(kind);
    if (eta_option != nullptr && eta_option->count() > 0) c.eta = eta;
    c.batch_size = batch_size;
    c.delta = delta;
    c.epsilon = epsilon;
    c.max_iterations = max_iterations;
    c.seed = seed;
    c.workers = workers;
    c.sr_l2 = sr_l2;
    c.lbp_outer_iterations = lbp_iterations;
    c.lbp_max_sweeps = lbp_sweeps;
    c.validate();
    return c;
  }
  DeepNetShape deep_shape() const { return {0, hidden1, hidden2, 0}; }
  SgdOptions sgd() const { return {deep_lr, deep_epochs, 32, seed}; }
};

void add_learn_flags(CLI::App& cmd, LearnFlags& f, bool single_learner) {
  if (single_learner)
    cmd.add_option("--learner", f.learner, "lbp, sr, mh or mh+")
        ->check(CLI::IsMember({"lbp", "sr", "mh", "mh+"}));
  f.eta_option = cmd.add_option("--eta", f.eta, "learning rate (default 0.1 for mh, 1 otherwise)")
                     ->check(CLI::PositiveNumber);
  cmd.add_option("--batch-size", f.batch_size, "sampling steps per gradient application")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--delta", f.delta, "gradient applications between validation checks")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--epsilon", f.epsilon, "validation checks without improvement before stopping")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--max-iter", f.max_iterations, "cap on gradient applications")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--split", f.split, "train,validation,test fractions");
  cmd.add_option("--seed", f.seed, "random seed");
  cmd.add_option("--workers", f.workers, "sampling threads")->check(CLI::PositiveNumber);
  cmd.add_flag("--deep,!--no-deep", f.deep, "use the deep factor");
  cmd.add_option("--min-category-count", f.min_category_count, "drop rarer categories")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--sr-l2", f.sr_l2, "L2 weight of softmax regression")->check(CLI::NonNegativeNumber);
  cmd.add_option("--lbp-iterations", f.lbp_iterations, "outer iterations of the lbp learner")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--lbp-sweeps", f.lbp_sweeps, "message sweeps per propagation")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--hidden1", f.hidden1, "first hidden layer width")->check(CLI::PositiveNumber);
  cmd.add_option("--hidden2", f.hidden2, "second hidden layer width")->check(CLI::PositiveNumber);
  cmd.add_option("--deep-epochs", f.deep_epochs, "SGD epochs of the deep net")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--deep-lr", f.deep_lr, "SGD learning rate of the deep net")
      ->check(CLI::NonNegativeNumber);
}

void add_synthetic_flags(CLI::App& cmd, SyntheticSpec& s, bool with_seed) {
  cmd.add_option("--n", s.nodes, "node count")->check(CLI::PositiveNumber);
  cmd.add_option("--c", s.categories, "category count")->check(CLI::PositiveNumber);
  cmd.add_option("--p-same", s.p_same, "probability an edge joins same-category nodes")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--mean-degree", s.mean_degree, "average degree")->check(CLI::NonNegativeNumber);
  cmd.add_option("--signal", s.feature_signal, "separation of the per-category feature means");
  cmd.add_option("--feature-dim", s.feature_dim, "feature count (0: one per category)");
  cmd.add_option("--labeled-fraction", s.labeled_fraction, "fraction of labeled nodes")
      ->check(CLI::Range(0.0, 1.0));
  if (with_seed) cmd.add_option("--seed", s.seed, "random seed");
}

Network load_training_network(const std::string& nodes, const std::string& edges,
                              std::size_t min_category_count) {
  return filter_rare_categories(load_network(nodes, edges), min_category_count);
}

// The labels, categories and split that a checkpoint was trained against.
struct CheckpointView {
  Network network;
  std::optional<DatasetSplit> split;
};

CheckpointView load_for_checkpoint(const Checkpoint& ck, const std::string& nodes,
                                   const std::string& edges) {
  LoadOptions options;
  options.categories = ck.categories;
  Network net = load_network(nodes, edges, options);
  if (net.feature_dim() != ck.params.shape().features)
    throw Error(ErrorCode::DimensionMismatch,
                "network has " + std::to_string(net.feature_dim()) + " features, model expects " +
                    std::to_string(ck.params.shape().features));
  if (net.num_labeled() == 0) return {std::move(net), std::nullopt};
  Network filtered = filter_rare_categories(net, ck.min_category_count);
  if (filtered.category_names() != ck.categories)
    throw Error(ErrorCode::SchemaMismatch, "network labels do not match the model's categories");
  auto split = split_labels(filtered, ck.fractions, ck.split_seed);
  return {std::move(filtered), std::move(split)};
}

Matrix hidden_for(const Checkpoint& ck, const Network& net) {
  if (!ck.deep) return Matrix(static_cast<Eigen::Index>(net.num_nodes()), 0);
  return embed_all(*ck.deep, net);
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  const Network net = generate_synthetic(f.spec);
  const fs::path dir(f.out);
  save_network(net, dir / "nodes.tsv", dir / "edges.tsv");
  save_category_dictionary(net.category_names(), dir / "categories.json");
  out << "wrote " << net.num_nodes() << " nodes, " << net.num_edges() << " edges, "
      << net.num_labeled() << " labels to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_featurize(FeaturizeFlags f, std::ostream& out) {
  f.options.fractions = parse_split_fractions(f.split);
  f.options.mean = f.mean == "occurrences" ? MeanMode::Occurrences : MeanMode::DistinctTokens;
  if (!f.schema.empty()) {
    auto in = detail::open_input(f.schema);
    f.options.schema = json::parse(in).get<ProfileSchema>();
  }
  const auto records = load_raw_records(f.raw);
  const auto edges = load_named_edges(f.edges);
  const auto data = featurize(records, edges, f.options);
  const fs::path dir(f.out);
  save_network(data.network, dir / "nodes.tsv", dir / "edges.tsv");
  save_category_dictionary(data.network.category_names(), dir / "categories.json");
  auto schema_out = detail::open_output(dir / "schema.json");
  schema_out << json(data.schema).dump(1) << '\n';
  out << "featurized " << data.network.num_nodes() << " users into " << data.network.feature_dim()
      << " features (" << data.schema.width() << " profile, " << 2 * data.table.categories
      << " content; vocabulary " << data.table.tokens.size() << ")\n";
  return kExitOk;
}

int cmd_train(const LearnFlags& f, const std::string& nodes, const std::string& edges,
              const std::string& out_dir, bool as_json, std::ostream& out) {
  const LearnerConfig config = f.config(parse_learner(f.learner));
  const SplitFractions fractions = parse_split_fractions(f.split);

  const Network net = load_training_network(nodes, edges, f.min_category_count);
  const DatasetSplit split = split_labels(net, fractions, f.seed);

  Checkpoint ck;
  Matrix hidden(static_cast<Eigen::Index>(net.num_nodes()), 0);
  std::optional<ParameterVector> head;
  if (f.deep) {
    auto deep = prepare_deep(net, split, f.deep_shape(), f.sgd());
    ck.deep = std::move(deep.net);
    hidden = std::move(deep.hidden);
    head = std::move(deep.head);
  }
  const TrainingTask task(net, split, std::move(hidden), std::move(head));
  const auto start = std::chrono::steady_clock::now();
  const TrainingRun run = train(task, config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ck.params = run.best_params;
  ck.categories = net.category_names();
  ck.config = config;
  ck.fractions = fractions;
  ck.split_seed = f.seed;
  ck.min_category_count = f.min_category_count;
  ck.best_val_acc = run.best_val_acc;
  ck.stop_reason = run.stop_reason;

  const fs::path dir(out_dir);
  save_checkpoint(ck, dir / "model.json");
  write_history_csv(run, dir / "history.csv");
  save_category_dictionary(ck.categories, dir / "categories.json");

  const std::size_t last = run.history.empty() ? 0 : run.history.back().iteration;
  if (as_json) {
    out << json{{"learner", f.learner},
                {"iterations", last},
                {"best_val_acc", run.best_val_acc},
                {"stop_reason", std::string(to_string(run.stop_reason))},
                {"seconds", seconds},
                {"model", (dir / "model.json").string()}}
               .dump(1)
        << '\n';
  } else {
    out << "learner " << f.learner << ", " << last << " iterations, best validation accuracy "
        << fixed(run.best_val_acc) << ", stopped: " << to_string(run.stop_reason) << '\n'
        << "wrote " << (dir / "model.json").string() << " and " << (dir / "history.csv").string()
        << '\n';
  }
  return kExitOk;
}

int cmd_predict(const std::string& model_file, const std::string& nodes, const std::string& edges,
                const std::string& out_file, const std::string& method, std::uint64_t steps,
                std::uint64_t seed, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(model_file);
  const CheckpointView view = load_for_checkpoint(ck, nodes, edges);
  const Network visible = view.split ? prediction_network(view.network, *view.split) : view.network;
  const FactorModel model(visible, hidden_for(ck, visible));

  PredictOptions options;
  options.method = method == "auto"      ? default_predictor(ck.config.learner)
                   : method == "max-sum" ? PredictMethod::MaxSum
                                         : PredictMethod::MHSample;
  options.steps = steps;
  options.seed = seed;
  options.lbp = {ck.config.lbp_max_sweeps, ck.config.lbp_message_tolerance, ck.config.lbp_damping};
  options.icm_sweeps = ck.config.icm_sweeps;
  const auto predicted = predict(model, ck.params, options);

  auto file = detail::open_output(out_file);
  file << "id\tpredicted_label\n";
  for (NodeId v = 0; v < visible.num_nodes(); ++v)
    file << visible.node_name(v) << '\t' << ck.categories[static_cast<std::size_t>(predicted[v])] << '\n';
  if (!file) throw Error(ErrorCode::Io, "failed writing " + out_file);
  out << "wrote " << visible.num_nodes() << " predictions to " << out_file << '\n';
  return kExitOk;
}

LabelConfiguration read_predictions(const std::string& file, const Network& net) {
  std::map<std::string, NodeId> ids;
  for (NodeId v = 0; v < net.num_nodes(); ++v) ids.emplace(net.node_name(v), v);
  std::map<std::string, CategoryId> cats;
  for (std::size_t k = 0; k < net.num_categories(); ++k)
    cats.emplace(net.category_names()[k], static_cast<CategoryId>(k));

  LabelConfiguration predicted(net.num_nodes(), kUnlabeled);
  auto in = detail::open_input(file);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::strip_cr(line);
    if (text.empty()) continue;
    const auto fields = detail::split_tabs(text);
    if (line_no == 1 && fields.size() == 2 && fields[0] == "id") continue;
    if (fields.size() != 2)
      throw Error(ErrorCode::MalformedRow, detail::where(file, line_no) + ": expected id<TAB>label");
    const auto node = ids.find(std::string(fields[0]));
    if (node == ids.end())
      throw Error(ErrorCode::MalformedRow, detail::where(file, line_no) + ": unknown node " + std::string(fields[0]));
    const auto cat = cats.find(std::string(fields[1]));
    if (cat == cats.end())
      throw Error(ErrorCode::MalformedRow, detail::where(file, line_no) + ": unknown category " + std::string(fields[1]));
    predicted[node->second] = cat->second;
  }
  return predicted;
}

int cmd_eval(const std::string& model_file, const std::string& nodes, const std::string& edges,
             const std::string& predictions, bool as_json, std::ostream& out) {
  const Checkpoint ck = load_checkpoint(model_file);
  const CheckpointView view = load_for_checkpoint(ck, nodes, edges);
  if (!view.split) throw Error(ErrorCode::EmptyLabelSet, "the node file has no labels to score against");
  const auto predicted = read_predictions(predictions, view.network);
  for (NodeId v : view.split->test)
    if (predicted[v] == kUnlabeled)
      throw Error(ErrorCode::MalformedRow, "no prediction for test node " + view.network.node_name(v));
  const MetricsReport report = evaluate(view.network, view.split->test, predicted);
  if (as_json)
    out << json(report).dump(1) << '\n';
  else
    out << "test nodes       " << view.split->test.size() << '\n' << format_table(report);
  return kExitOk;
}

struct BenchRow {
  std::string method;
  std::size_t workers = 1;
  double seconds = 0.0;
  double speedup = 0.0;  // 0 when not applicable
  double val_acc = 0.0;
  MetricsReport test;
};

int cmd_bench(const LearnFlags& f, SyntheticSpec spec, const std::string& learners_csv,
              const std::string& nodes, const std::string& edges, bool as_json, std::ostream& out) {
  std::vector<LearnerKind> learners;
  std::stringstream ss(learners_csv);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) learners.push_back(parse_learner(item));
  for (auto kind : learners) (void)f.config(kind);
  const SplitFractions fractions = parse_split_fractions(f.split);
  spec.seed = f.seed;

  const Network net = nodes.empty() ? generate_synthetic(spec)
                                    : load_training_network(nodes, edges, f.min_category_count);
  const DatasetSplit split = split_labels(net, fractions, f.seed);
  std::vector<BenchRow> rows;

  {
    const auto start = std::chrono::steady_clock::now();
    const auto glp = glp_baseline(prediction_network(net, split));
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({"glp", 1, t, 0.0, 0.0, evaluate(net, split.test, glp)});
  }
  {
    const TrainingTask task(net, split);
    const auto start = std::chrono::steady_clock::now();
    const auto lr = logistic_baseline(task, f.sr_l2);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({"lr", 1, t, 0.0, task.validation_accuracy(lr), evaluate(net, split.test, lr)});
  }
  for (auto kind : learners) {
    std::vector<std::size_t> worker_counts{1};
    const bool sampling = kind == LearnerKind::MH || kind == LearnerKind::MHPlus;
    if (sampling && f.workers > 1) worker_counts.push_back(f.workers);
    double serial = 0.0;
    for (std::size_t w : worker_counts) {
      ExperimentOptions options;
      options.config = f.config(kind);
      options.config.workers = w;
      options.deep = f.deep;
      options.deep_shape = f.deep_shape();
      options.sgd = f.sgd();
      const auto result = run_experiment(net, split, options);
      if (w == 1) serial = result.train_seconds;
      rows.push_back({std::string(to_string(kind)), w, result.train_seconds,
                      sampling ? serial / result.train_seconds : 0.0, result.run.best_val_acc,
                      result.test});
    }
  }

  if (as_json) {
    json j = json::array();
    for (const auto& r : rows)
      j.push_back({{"method", r.method},
                   {"workers", r.workers},
                   {"seconds", r.seconds},
                   {"speedup", r.speedup},
                   {"val_acc", r.val_acc},
                   {"test_accuracy", r.test.micro_accuracy},
                   {"test_macro_f1", r.test.macro_f1}});
    out << json{{"nodes", net.num_nodes()}, {"edges", net.num_edges()}, {"rows", j}}.dump(1) << '\n';
  } else {
    out << "nodes " << net.num_nodes() << ", edges " << net.num_edges() << ", categories "
        << net.num_categories() << '\n';
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-8s %7s %10s %8s %8s %9s %9s\n", "method", "workers",
                  "train_s", "speedup", "val_acc", "test_acc", "test_f1");
    out << buf;
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%-8s %7zu %10.3f %8s %8.4f %9.4f %9.4f\n", r.method.c_str(),
                    r.workers, r.seconds, r.speedup > 0.0 ? fixed(r.speedup, 2).c_str() : "-",
                    r.val_acc, r.test.micro_accuracy, r.test.macro_f1);
      out << buf;
    }
  }
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NumericFailure: return kExitNumeric;
    case ErrorCode::InvalidArgument: return kExitUsage;
    default: return kExitData;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging_from_env();
  CLI::App app{"Semi-supervised factor graph model for node classification", "ssfgm"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic homophily network");
  add_synthetic_flags(*generate, gen.spec, true);
  generate->add_option("--out", gen.out, "output directory")->required();

  FeaturizeFlags feat;
  auto* featurize_cmd = app.add_subcommand("featurize", "turn raw user records into a node file");
  featurize_cmd->add_option("--raw", feat.raw, "JSON-lines user records")->required()->check(CLI::ExistingFile);
  featurize_cmd->add_option("--edges", feat.edges, "edge file over user ids")->required()->check(CLI::ExistingFile);
  featurize_cmd->add_option("--out", feat.out, "output directory")->required();
  featurize_cmd->add_option("--min-docs", feat.options.min_docs, "drop users with fewer posts");
  featurize_cmd->add_option("--min-category-count", feat.options.min_category_count, "drop rarer categories")
      ->check(CLI::PositiveNumber);
  featurize_cmd->add_option("--min-occurrence", feat.options.min_occurrence, "drop rarer tokens");
  featurize_cmd->add_option("--split", feat.split, "train,validation,test fractions");
  featurize_cmd->add_option("--seed", feat.options.seed, "split seed");
  featurize_cmd->add_option("--schema", feat.schema, "profile schema JSON")->check(CLI::ExistingFile);
  featurize_cmd->add_option("--mean", feat.mean, "content mean over distinct tokens or occurrences")
      ->check(CLI::IsMember({"distinct", "occurrences"}));

  LearnFlags train_flags;
  std::string train_nodes, train_edges, train_out;
  bool train_json = false;
  auto* train_cmd = app.add_subcommand("train", "fit the model and write a checkpoint");
  train_cmd->add_option("--nodes", train_nodes, "node file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--edges", train_edges, "edge file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_out, "output directory")->required();
  train_cmd->add_flag("--json", train_json, "print a JSON summary");
  add_learn_flags(*train_cmd, train_flags, true);

  std::string pred_model, pred_nodes, pred_edges, pred_out, pred_method = "auto";
  std::uint64_t pred_steps = 0, pred_seed = 1;
  auto* predict_cmd = app.add_subcommand("predict", "label every node with a trained model");
  predict_cmd->add_option("--model", pred_model, "checkpoint")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--nodes", pred_nodes, "node file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--edges", pred_edges, "edge file")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", pred_out, "predictions file")->required();
  predict_cmd->add_option("--method", pred_method, "auto, max-sum or mh")
      ->check(CLI::IsMember({"auto", "max-sum", "mh"}));
  predict_cmd->add_option("--steps", pred_steps, "sampling steps (0: ten per node)");
  predict_cmd->add_option("--seed", pred_seed, "sampling seed");

  std::string eval_model, eval_nodes, eval_edges, eval_predictions;
  bool eval_json = false;
  auto* eval_cmd = app.add_subcommand("eval", "score predictions on the test split");
  eval_cmd->add_option("--model", eval_model, "checkpoint")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--nodes", eval_nodes, "node file with true labels")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--edges", eval_edges, "edge file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--predictions", eval_predictions, "id<TAB>label file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--json", eval_json, "print JSON");

  LearnFlags bench_flags;
  SyntheticSpec bench_spec;
  bench_spec.nodes = 20000;
  bench_spec.p_same = 0.85;
  std::string bench_learners = "sr,mh,mh+", bench_nodes, bench_edges;
  bool bench_json = false;
  auto* bench_cmd = app.add_subcommand("bench", "time learners and baselines at fixed seeds");
  add_synthetic_flags(*bench_cmd, bench_spec, false);
  add_learn_flags(*bench_cmd, bench_flags, false);
  bench_cmd->add_option("--learners", bench_learners, "comma-separated learners");
  auto* bench_nodes_opt = bench_cmd->add_option("--nodes", bench_nodes, "node file instead of a synthetic graph")
                              ->check(CLI::ExistingFile);
  bench_cmd->add_option("--edges", bench_edges, "edge file")->check(CLI::ExistingFile)->needs(bench_nodes_opt);
  bench_nodes_opt->needs(bench_cmd->get_option("--edges"));
  bench_cmd->add_flag("--json", bench_json, "print JSON");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("ssfgm");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out);
    if (featurize_cmd->parsed()) return cmd_featurize(feat, out);
    if (train_cmd->parsed())
      return cmd_train(train_flags, train_nodes, train_edges, train_out, train_json, out);
    if (predict_cmd->parsed())
      return cmd_predict(pred_model, pred_nodes, pred_edges, pred_out, pred_method, pred_steps,
                         pred_seed, out);
    if (eval_cmd->parsed())
      return cmd_eval(eval_model, eval_nodes, eval_edges, eval_predictions, eval_json, out);
    if (bench_cmd->parsed())
      return cmd_bench(bench_flags, bench_spec, bench_learners, bench_nodes, bench_edges, bench_json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace ssfgm
