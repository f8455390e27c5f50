#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ssfgm {

using NodeId = std::uint32_t;
using CategoryId = std::int32_t;
inline constexpr CategoryId kUnlabeled = -1;

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Full assignment of a category to every node; the state of a chain.
using LabelConfiguration = std::vector<CategoryId>;

enum class EdgeKind : std::uint8_t { Directed, Undirected };

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  EdgeKind kind = EdgeKind::Undirected;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One incident edge seen from a node. `outgoing` is true when the node is
/// the edge's src.
struct Incidence {
  NodeId neighbor;
  std::uint32_t edge;
  EdgeKind kind;
  bool outgoing;
};

/// Immutable partially labeled graph: features on every node, categories on
/// a subset. Construction validates all structural invariants.
class Network {
 public:
  Network(std::vector<std::string> node_names, Matrix features, std::vector<Edge> edges,
          std::vector<CategoryId> labels, std::vector<std::string> category_names);

  std::size_t num_nodes() const { return node_names_.size(); }
  std::size_t feature_dim() const { return static_cast<std::size_t>(features_.cols()); }
  std::size_t num_categories() const { return category_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::string& node_name(NodeId v) const { return node_names_[v]; }
  const std::vector<std::string>& node_names() const { return node_names_; }
  const std::vector<std::string>& category_names() const { return category_names_; }

  const Matrix& features() const { return features_; }
  std::span<const double> features(NodeId v) const {
    return {features_.data() + static_cast<std::ptrdiff_t>(v) * features_.cols(),
            static_cast<std::size_t>(features_.cols())};
  }

  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Incidence> incident(NodeId v) const {
    return {incidence_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  CategoryId label(NodeId v) const { return labels_[v]; }
  bool is_labeled(NodeId v) const { return labels_[v] != kUnlabeled; }
  const std::vector<CategoryId>& labels() const { return labels_; }
  std::vector<NodeId> labeled_nodes() const;
  std::size_t num_labeled() const;

  /// Same graph and category dictionary with a different label map.
  Network with_labels(std::vector<CategoryId> labels) const;
  /// Keeps only the labels of `keep`; every other node becomes unlabeled.
  Network restrict_labels(std::span<const NodeId> keep) const;

 private:
  std::vector<std::string> node_names_;
  Matrix features_;
  std::vector<Edge> edges_;
  std::vector<CategoryId> labels_;
  std::vector<std::string> category_names_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidence_;
};

struct LoadOptions {
  /// Category dictionary (name -> id) to index labels with. Labels missing
  /// from it are loaded as unlabeled. Without one, ids follow sorted names.
  std::optional<std::vector<std::string>> categories;
};

Network load_network(const std::filesystem::path& node_file,
                     const std::filesystem::path& edge_file, const LoadOptions& options = {});
void save_network(const Network& net, const std::filesystem::path& node_file,
                  const std::filesystem::path& edge_file);

std::vector<std::string> load_category_dictionary(const std::filesystem::path& file);
void save_category_dictionary(std::span<const std::string> names,
                              const std::filesystem::path& file);

/// Drops labels of categories with fewer than `min_count` labeled nodes and
/// re-indexes the survivors densely.
Network filter_rare_categories(const Network& net, std::size_t min_count = 10);

struct SplitFractions {
  double train = 0.5;
  double validation = 0.1;
  double test = 0.4;
};

struct DatasetSplit {
  std::vector<NodeId> train;
  std::vector<NodeId> validation;
  std::vector<NodeId> test;
};

/// Uniform random partition of the labeled nodes. Part sizes follow the
/// largest-remainder rule; each part is returned sorted.
DatasetSplit split_labels(const Network& net, const SplitFractions& fractions, std::uint64_t seed);

SplitFractions parse_split_fractions(const std::string& text);

}  // namespace ssfgm
