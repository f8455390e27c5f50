#include "ssfgm/network.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ssfgm/error.hpp"
#include "ssfgm/rng.hpp"
#include "text_io.hpp"

namespace ssfgm {

using detail::where;

Network::Network(std::vector<std::string> node_names, Matrix features, std::vector<Edge> edges,
                 std::vector<CategoryId> labels, std::vector<std::string> category_names)
    : node_names_(std::move(node_names)),
      features_(std::move(features)),
      edges_(std::move(edges)),
      labels_(std::move(labels)),
      category_names_(std::move(category_names)) {
  const std::size_t n = node_names_.size();
  if (static_cast<std::size_t>(features_.rows()) != n)
    throw Error(ErrorCode::InconsistentFeatureArity, "feature matrix has " +
                                                         std::to_string(features_.rows()) +
                                                         " rows for " + std::to_string(n) +
                                                         " nodes");
  if (labels_.size() != n)
    throw Error(ErrorCode::InvalidArgument, "label vector length differs from node count");
  if (n > std::numeric_limits<NodeId>::max())
    throw Error(ErrorCode::InvalidArgument, "too many nodes");
  if (!features_.allFinite()) throw Error(ErrorCode::NonFiniteFeature, "feature matrix");

  const auto num_cat = static_cast<CategoryId>(category_names_.size());
  for (CategoryId y : labels_) {
    if (y != kUnlabeled && (y < 0 || y >= num_cat))
      throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(y) + " out of range");
  }

  std::set<std::tuple<NodeId, NodeId, EdgeKind>> seen;
  for (auto& e : edges_) {
    if (e.src >= n || e.dst >= n)
      throw Error(ErrorCode::UnknownNodeInEdge,
                  "edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
    if (e.src == e.dst) throw Error(ErrorCode::SelfLoop, "node " + std::to_string(e.src));
    if (e.kind == EdgeKind::Undirected && e.src > e.dst) std::swap(e.src, e.dst);
    if (!seen.emplace(e.src, e.dst, e.kind).second)
      throw Error(ErrorCode::DuplicateEdge,
                  node_names_[e.src] + " " + node_names_[e.dst]);
  }

  offsets_.assign(n + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.src + 1];
    ++offsets_[e.dst + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(offsets_[n]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    incidence_[cursor[e.src]++] = {e.dst, i, e.kind, true};
    incidence_[cursor[e.dst]++] = {e.src, i, e.kind, false};
  }
}

std::vector<NodeId> Network::labeled_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < labels_.size(); ++v)
    if (labels_[v] != kUnlabeled) out.push_back(v);
  return out;
}

std::size_t Network::num_labeled() const {
  return static_cast<std::size_t>(
      std::count_if(labels_.begin(), labels_.end(), [](CategoryId y) { return y != kUnlabeled; }));
}

Network Network::with_labels(std::vector<CategoryId> labels) const {
  return Network(node_names_, features_, edges_, std::move(labels), category_names_);
}

Network Network::restrict_labels(std::span<const NodeId> keep) const {
  std::vector<CategoryId> labels(labels_.size(), kUnlabeled);
  for (NodeId v : keep) labels.at(v) = labels_.at(v);
  return with_labels(std::move(labels));
}

Network load_network(const std::filesystem::path& node_file, const std::filesystem::path& edge_file,
                     const LoadOptions& options) {
  auto in = detail::open_input(node_file);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line))
    throw Error(ErrorCode::MalformedRow, where(node_file, 1) + ": missing header");
  ++line_no;
  const auto header = detail::split_tabs(detail::strip_cr(line));
  if (header.size() < 2 || header[0] != "id" || header[1] != "label")
    throw Error(ErrorCode::MalformedRow,
                where(node_file, 1) + ": header must start with id<TAB>label");
  const std::size_t dim = header.size() - 2;

  std::vector<std::string> names;
  std::vector<std::string> raw_labels;
  std::vector<double> values;
  std::unordered_map<std::string, NodeId> index;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = detail::strip_cr(line);
    if (row.empty()) continue;
    const auto fields = detail::split_tabs(row);
    if (fields.size() != header.size())
      throw Error(ErrorCode::InconsistentFeatureArity,
                  where(node_file, line_no) + ": expected " + std::to_string(dim) +
                      " features, found " +
                      std::to_string(fields.size() < 2 ? 0 : fields.size() - 2));
    std::string name(fields[0]);
    if (name.empty()) throw Error(ErrorCode::MalformedRow, where(node_file, line_no) + ": empty id");
    if (!index.emplace(name, static_cast<NodeId>(names.size())).second)
      throw Error(ErrorCode::DuplicateNode, where(node_file, line_no) + ": " + name);
    for (std::size_t j = 0; j < dim; ++j) {
      const auto v = detail::parse_double(fields[j + 2]);
      if (!v)
        throw Error(ErrorCode::MalformedRow, where(node_file, line_no) + ": bad feature '" +
                                                 std::string(fields[j + 2]) + "'");
      if (!std::isfinite(*v))
        throw Error(ErrorCode::NonFiniteFeature, where(node_file, line_no) + ": feature f" +
                                                     std::to_string(j) + " of " + name);
      values.push_back(*v);
    }
    names.push_back(std::move(name));
    raw_labels.emplace_back(fields[1]);
  }

  std::vector<std::string> categories;
  if (options.categories) {
    categories = *options.categories;
  } else {
    std::set<std::string> distinct;
    for (const auto& l : raw_labels)
      if (!l.empty()) distinct.insert(l);
    categories.assign(distinct.begin(), distinct.end());
  }
  std::unordered_map<std::string, CategoryId> cat_index;
  for (std::size_t k = 0; k < categories.size(); ++k)
    cat_index.emplace(categories[k], static_cast<CategoryId>(k));
  std::vector<CategoryId> labels(names.size(), kUnlabeled);
  for (std::size_t v = 0; v < names.size(); ++v) {
    if (raw_labels[v].empty()) continue;
    const auto it = cat_index.find(raw_labels[v]);
    if (it != cat_index.end()) labels[v] = it->second;
  }

  Matrix features(static_cast<Eigen::Index>(names.size()), static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), features.data());

  std::vector<Edge> edges;
  std::set<std::tuple<NodeId, NodeId, EdgeKind>> seen;
  auto ein = detail::open_input(edge_file);
  line_no = 0;
  while (std::getline(ein, line)) {
    ++line_no;
    const auto row = detail::strip_cr(line);
    if (row.empty()) continue;
    const auto fields = detail::split_tabs(row);
    if (line_no == 1 && fields.size() == 3 && fields[0] == "src" && fields[1] == "dst") continue;
    if (fields.size() != 3 || (fields[2] != "D" && fields[2] != "U"))
      throw Error(ErrorCode::MalformedRow,
                  where(edge_file, line_no) + ": expected src<TAB>dst<TAB>D|U");
    const auto src = index.find(std::string(fields[0]));
    const auto dst = index.find(std::string(fields[1]));
    if (src == index.end() || dst == index.end())
      throw Error(ErrorCode::UnknownNodeInEdge,
                  where(edge_file, line_no) + ": " +
                      std::string(src == index.end() ? fields[0] : fields[1]));
    Edge e{src->second, dst->second, fields[2] == "D" ? EdgeKind::Directed : EdgeKind::Undirected};
    if (e.src == e.dst) throw Error(ErrorCode::SelfLoop, where(edge_file, line_no));
    if (e.kind == EdgeKind::Undirected && e.src > e.dst) std::swap(e.src, e.dst);
    if (!seen.emplace(e.src, e.dst, e.kind).second)
      throw Error(ErrorCode::DuplicateEdge, where(edge_file, line_no));
    edges.push_back(e);
  }

  return Network(std::move(names), std::move(features), std::move(edges), std::move(labels),
                 std::move(categories));
}

void save_network(const Network& net, const std::filesystem::path& node_file,
                  const std::filesystem::path& edge_file) {
  auto out = detail::open_output(node_file);
  out << "id\tlabel";
  for (std::size_t j = 0; j < net.feature_dim(); ++j) out << "\tf" << j;
  out << '\n';
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    out << net.node_name(v) << '\t';
    if (net.is_labeled(v)) out << net.category_names()[net.label(v)];
    for (double x : net.features(v)) out << '\t' << detail::format_double(x);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed: " + node_file.string());

  auto eout = detail::open_output(edge_file);
  for (const auto& e : net.edges())
    eout << net.node_name(e.src) << '\t' << net.node_name(e.dst) << '\t'
         << (e.kind == EdgeKind::Directed ? 'D' : 'U') << '\n';
  if (!eout) throw Error(ErrorCode::Io, "write failed: " + edge_file.string());
}

std::vector<std::string> load_category_dictionary(const std::filesystem::path& file) {
  auto in = detail::open_input(file);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedRow, file.string() + ": " + ex.what());
  }
  std::vector<std::string> names(j.size());
  for (const auto& [name, id] : j.items()) {
    const auto k = id.get<std::size_t>();
    if (k >= names.size() || !names[k].empty())
      throw Error(ErrorCode::MalformedRow, file.string() + ": category ids must be dense");
    names[k] = name;
  }
  return names;
}

void save_category_dictionary(std::span<const std::string> names,
                              const std::filesystem::path& file) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < names.size(); ++k) j[names[k]] = k;
  auto out = detail::open_output(file);
  out << j.dump(2) << '\n';
}

Network filter_rare_categories(const Network& net, std::size_t min_count) {
  if (min_count < 1) throw Error(ErrorCode::InvalidArgument, "min_count must be >= 1");
  std::vector<std::size_t> counts(net.num_categories(), 0);
  for (CategoryId y : net.labels())
    if (y != kUnlabeled) ++counts[static_cast<std::size_t>(y)];

  std::vector<CategoryId> remap(net.num_categories(), kUnlabeled);
  std::vector<std::string> kept;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] >= min_count) {
      remap[k] = static_cast<CategoryId>(kept.size());
      kept.push_back(net.category_names()[k]);
    }
  }
  std::vector<CategoryId> labels(net.num_nodes(), kUnlabeled);
  bool any = false;
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (!net.is_labeled(v)) continue;
    labels[v] = remap[static_cast<std::size_t>(net.label(v))];
    any = any || labels[v] != kUnlabeled;
  }
  if (!any)
    throw Error(ErrorCode::AllLabelsRemoved,
                "no category has at least " + std::to_string(min_count) + " labeled nodes");
  return Network(net.node_names(), net.features(), net.edges(), std::move(labels),
                 std::move(kept));
}

DatasetSplit split_labels(const Network& net, const SplitFractions& fractions, std::uint64_t seed) {
  const std::array<double, 3> f{fractions.train, fractions.validation, fractions.test};
  for (double x : f)
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidArgument, "split fractions must be positive");
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "split fractions must sum to 1");

  auto nodes = net.labeled_nodes();
  if (nodes.empty()) throw Error(ErrorCode::EmptyLabelSet, "network has no labeled nodes");
  const std::size_t n = nodes.size();

  // Largest remainder; ties go to the earlier part.
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = f[i] * static_cast<double>(n);
    sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b] + 1e-12; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++sizes[order[r % 3]];

  CounterRng rng(seed);
  rng.shuffle(std::span<NodeId>(nodes));
  DatasetSplit split;
  auto begin = nodes.begin();
  split.train.assign(begin, begin + static_cast<std::ptrdiff_t>(sizes[0]));
  begin += static_cast<std::ptrdiff_t>(sizes[0]);
  split.validation.assign(begin, begin + static_cast<std::ptrdiff_t>(sizes[1]));
  begin += static_cast<std::ptrdiff_t>(sizes[1]);
  split.test.assign(begin, nodes.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

SplitFractions parse_split_fractions(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = detail::parse_double(item);
    if (!v) throw Error(ErrorCode::InvalidArgument, "bad split fraction '" + item + "'");
    parts.push_back(*v);
  }
  if (parts.size() != 3)
    throw Error(ErrorCode::InvalidArgument, "split needs three fractions: train,val,test");
  return {parts[0], parts[1], parts[2]};
}

}  // namespace ssfgm
