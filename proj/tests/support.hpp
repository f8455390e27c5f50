#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <unistd.h>

#include "ssfgm/network.hpp"
#include "ssfgm/params.hpp"
#include "ssfgm/rng.hpp"

namespace ssfgm::testing {

struct RandomNetworkSpec {
  std::size_t nodes = 5;
  std::size_t categories = 2;
  std::size_t features = 2;
  double edge_probability = 0.5;
  double directed_fraction = 0.0;
  double labeled_fraction = 0.5;
  bool tree = false;
};

/// Small random network; with `tree` each node v > 0 links to a random
/// earlier node, which gives a spanning tree.
inline Network random_network(const RandomNetworkSpec& spec, std::uint64_t seed) {
  CounterRng rng(seed);
  const std::size_t n = spec.nodes;
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.features));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  std::vector<Edge> edges;
  auto kind = [&] { return rng.bernoulli(spec.directed_fraction) ? EdgeKind::Directed : EdgeKind::Undirected; };
  if (spec.tree) {
    for (NodeId v = 1; v < n; ++v) {
      const auto u = static_cast<NodeId>(rng.uniform_index(v));
      const EdgeKind k = kind();
      if (k == EdgeKind::Directed && rng.bernoulli(0.5))
        edges.push_back({v, u, k});
      else
        edges.push_back({u, v, k});
    }
  } else {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (rng.bernoulli(spec.edge_probability)) {
          const EdgeKind k = kind();
          if (k == EdgeKind::Directed && rng.bernoulli(0.5))
            edges.push_back({v, u, k});
          else
            edges.push_back({u, v, k});
        }
  }
  std::vector<CategoryId> labels(n, kUnlabeled);
  for (NodeId v = 0; v < n; ++v)
    if (rng.bernoulli(spec.labeled_fraction))
      labels[v] = static_cast<CategoryId>(rng.uniform_index(spec.categories));
  std::vector<std::string> names;
  for (NodeId v = 0; v < n; ++v) names.push_back("n" + std::to_string(v));
  std::vector<std::string> cats;
  for (std::size_t k = 0; k < spec.categories; ++k) cats.push_back("k" + std::to_string(k));
  return Network(std::move(names), std::move(x), std::move(edges), std::move(labels), std::move(cats));
}

inline ParameterVector random_theta(const ModelShape& shape, CounterRng& rng, double scale = 1.0) {
  ParameterVector theta(shape);
  for (double& v : theta.flat()) v = scale * rng.normal();
  return theta;
}

inline LabelConfiguration random_config(std::size_t n, std::size_t c, CounterRng& rng) {
  LabelConfiguration y(n);
  for (auto& v : y) v = static_cast<CategoryId>(rng.uniform_index(c));
  return y;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("ssfgm-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }

  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace ssfgm::testing
