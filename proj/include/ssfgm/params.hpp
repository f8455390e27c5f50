#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ssfgm/network.hpp"

namespace ssfgm {

/// Dimensions of the parameter space: C categories, D raw features and H2
/// deep-embedding units (0 when the deep factor is disabled).
struct ModelShape {
  std::size_t categories = 0;
  std::size_t features = 0;
  std::size_t hidden = 0;

  friend bool operator==(const ModelShape&, const ModelShape&) = default;

  std::size_t alpha_offset() const { return 0; }
  std::size_t beta_offset() const { return categories * features; }
  std::size_t directed_offset() const { return beta_offset() + categories * hidden; }
  std::size_t undirected_offset() const { return directed_offset() + categories * categories; }
  std::size_t undirected_cells() const { return categories * (categories + 1) / 2; }
  std::size_t size() const { return undirected_offset() + undirected_cells(); }

  std::size_t alpha_index(CategoryId k, std::size_t j) const {
    return alpha_offset() + static_cast<std::size_t>(k) * features + j;
  }
  std::size_t beta_index(CategoryId k, std::size_t j) const {
    return beta_offset() + static_cast<std::size_t>(k) * hidden + j;
  }
  /// Cell of the correlation weight for an edge whose src has category
  /// `k` and dst has `l`. Undirected kinds share one packed cell per
  /// unordered pair, so gamma(k,l) and gamma(l,k) are the same storage.
  std::size_t gamma_index(EdgeKind kind, CategoryId k, CategoryId l) const {
    const auto a = static_cast<std::size_t>(k);
    const auto b = static_cast<std::size_t>(l);
    if (kind == EdgeKind::Directed) return directed_offset() + a * categories + b;
    const auto lo = std::min(a, b);
    const auto hi = std::max(a, b);
    // rows lo = 0..C-1 hold C-lo cells each
    const auto row_start = lo * categories - (lo * (lo + 1)) / 2 + lo;
    return undirected_offset() + row_start + (hi - lo);
  }
};

struct ParameterTag {};
struct StatisticsTag {};

/// Flat vector over the concatenation (alpha, beta, gamma_directed,
/// gamma_undirected) with block accessors. The tag keeps parameters and
/// sufficient statistics from being mixed up.
template <typename Tag>
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(const ModelShape& shape) : shape_(shape), data_(shape.size(), 0.0) {}

  const ModelShape& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> alpha(CategoryId k) {
    return {data_.data() + shape_.alpha_index(k, 0), shape_.features};
  }
  std::span<const double> alpha(CategoryId k) const {
    return {data_.data() + shape_.alpha_index(k, 0), shape_.features};
  }
  std::span<double> beta(CategoryId k) {
    return {data_.data() + shape_.beta_index(k, 0), shape_.hidden};
  }
  std::span<const double> beta(CategoryId k) const {
    return {data_.data() + shape_.beta_index(k, 0), shape_.hidden};
  }
  double& gamma(EdgeKind kind, CategoryId k, CategoryId l) {
    return data_[shape_.gamma_index(kind, k, l)];
  }
  double gamma(EdgeKind kind, CategoryId k, CategoryId l) const {
    return data_[shape_.gamma_index(kind, k, l)];
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  BlockVector& operator+=(const BlockVector& other) {
    assert(shape_ == other.shape_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }
  BlockVector& operator-=(const BlockVector& other) {
    assert(shape_ == other.shape_);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }
  BlockVector& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }
  friend BlockVector operator-(BlockVector a, const BlockVector& b) { return a -= b; }
  friend BlockVector operator+(BlockVector a, const BlockVector& b) { return a += b; }

  bool all_finite() const {
    for (double x : data_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  friend bool operator==(const BlockVector&, const BlockVector&) = default;

 private:
  ModelShape shape_;
  std::vector<double> data_;
};

/// theta = (alpha, beta, gamma).
using ParameterVector = BlockVector<ParameterTag>;
/// An element of the statistic space (Phi, Psi, Omega aggregates).
using SufficientStatistics = BlockVector<StatisticsTag>;

inline double dot(const ParameterVector& theta, const SufficientStatistics& stats) {
  assert(theta.shape() == stats.shape());
  const auto a = theta.flat();
  const auto b = stats.flat();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void add_scaled(ParameterVector& theta, const SufficientStatistics& step, double scale) {
  assert(theta.shape() == step.shape());
  auto a = theta.flat();
  const auto b = step.flat();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

/// Largest |gamma_kl - gamma_lk| over the undirected block as seen through
/// the accessor; zero by construction of the packed layout.
double undirected_asymmetry(const ParameterVector& theta);

void to_json(nlohmann::json& j, const ParameterVector& theta);
void from_json(const nlohmann::json& j, ParameterVector& theta);

}  // namespace ssfgm
