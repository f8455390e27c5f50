#include "ssfgm/params.hpp"

#include <nlohmann/json.hpp>

#include "ssfgm/error.hpp"

namespace ssfgm {

double undirected_asymmetry(const ParameterVector& theta) {
  const auto c = static_cast<CategoryId>(theta.shape().categories);
  double worst = 0.0;
  for (CategoryId k = 0; k < c; ++k)
    for (CategoryId l = 0; l < c; ++l)
      worst = std::max(worst, std::abs(theta.gamma(EdgeKind::Undirected, k, l) -
                                       theta.gamma(EdgeKind::Undirected, l, k)));
  return worst;
}

namespace {

std::vector<double> slice(const ParameterVector& theta, std::size_t begin, std::size_t end) {
  const auto f = theta.flat();
  return {f.begin() + static_cast<std::ptrdiff_t>(begin), f.begin() + static_cast<std::ptrdiff_t>(end)};
}

void unslice(const nlohmann::json& j, const char* key, std::span<double> out) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != out.size())
    throw Error(ErrorCode::DimensionMismatch, std::string("parameter block ") + key);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = arr[i].get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const ParameterVector& theta) {
  const auto& s = theta.shape();
  if (!theta.all_finite()) throw Error(ErrorCode::NumericFailure, "non-finite parameters");
  j = nlohmann::json{
      {"version", 1},
      {"categories", s.categories},
      {"features", s.features},
      {"hidden", s.hidden},
      {"edge_kinds", {"directed", "undirected"}},
      {"alpha", slice(theta, s.alpha_offset(), s.beta_offset())},
      {"beta", slice(theta, s.beta_offset(), s.directed_offset())},
      {"gamma_directed", slice(theta, s.directed_offset(), s.undirected_offset())},
      {"gamma_undirected_packed", slice(theta, s.undirected_offset(), s.size())},
  };
}

void from_json(const nlohmann::json& j, ParameterVector& theta) {
  if (j.at("version").get<int>() != 1)
    throw Error(ErrorCode::InvalidArgument, "unsupported parameter version");
  ModelShape shape{j.at("categories").get<std::size_t>(), j.at("features").get<std::size_t>(),
                   j.at("hidden").get<std::size_t>()};
  ParameterVector out(shape);
  auto f = out.flat();
  unslice(j, "alpha", f.subspan(shape.alpha_offset(), shape.beta_offset()));
  unslice(j, "beta", f.subspan(shape.beta_offset(), shape.directed_offset() - shape.beta_offset()));
  unslice(j, "gamma_directed",
          f.subspan(shape.directed_offset(), shape.undirected_offset() - shape.directed_offset()));
  unslice(j, "gamma_undirected_packed",
          f.subspan(shape.undirected_offset(), shape.size() - shape.undirected_offset()));
  theta = std::move(out);
}

}  // namespace ssfgm
