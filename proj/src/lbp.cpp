#include "ssfgm/lbp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssfgm/error.hpp"

namespace ssfgm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class Semiring { SumProduct, MaxSum };

void shift_to_zero_max(std::span<double> m) {
  const double top = *std::max_element(m.begin(), m.end());
  for (double& x : m) x -= top;
}

double log_sum_exp(std::span<const double> v) {
  const double top = *std::max_element(v.begin(), v.end());
  if (top == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - top);
  return top + std::log(s);
}

std::size_t side_slot(const Incidence& inc) { return 2 * inc.edge + (inc.outgoing ? 0 : 1); }

class Propagator {
 public:
  Propagator(const FactorModel& model, const ParameterVector& theta, bool clamp,
             const LbpOptions& options, Semiring semiring)
      : model_(model), theta_(theta), options_(options), semiring_(semiring) {
    model.check_shape(theta);
    if (options.max_sweeps < 1) throw Error(ErrorCode::InvalidArgument, "max_sweeps must be >= 1");
    if (!(options.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
    if (options.damping < 0.0 || options.damping >= 1.0)
      throw Error(ErrorCode::InvalidArgument, "damping must be in [0, 1)");

    const auto& net = model.network();
    c_ = static_cast<std::size_t>(model.num_categories());
    const std::size_t n = net.num_nodes();
    unary_.resize(n * c_);
    for (NodeId v = 0; v < n; ++v) {
      for (CategoryId k = 0; k < static_cast<CategoryId>(c_); ++k) {
        double u = model.log_unary(theta, v, k);
        if (clamp && net.is_labeled(v) && net.label(v) != k) u = kNegInf;
        unary_[v * c_ + static_cast<std::size_t>(k)] = u;
      }
    }
    store_.categories = c_;
    store_.to_factor.assign(2 * net.num_edges() * c_, 0.0);
    store_.to_variable.assign(2 * net.num_edges() * c_, 0.0);
    belief_.resize(n * c_);
    scratch_.resize(c_);
    terms_.resize(c_);
  }

  void run() {
    for (sweeps_ = 1; sweeps_ <= options_.max_sweeps; ++sweeps_) {
      update_variable_messages();
      const double residual = update_factor_messages();
      store_.max_residual = residual;
      if (residual < options_.tolerance) {
        converged_ = true;
        break;
      }
    }
    sweeps_ = std::min(sweeps_, options_.max_sweeps);
    update_variable_messages();
  }

  std::span<const double> belief(NodeId v) const { return {belief_.data() + v * c_, c_}; }

  LbpResult marginals() const {
    const auto& net = model_.network();
    LbpResult out;
    out.converged = converged_;
    out.sweeps = sweeps_;
    out.max_residual = store_.max_residual;
    out.node_marginals.resize(static_cast<Eigen::Index>(net.num_nodes()),
                              static_cast<Eigen::Index>(c_));
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      const auto b = belief(v);
      const double z = log_sum_exp(b);
      for (std::size_t k = 0; k < c_; ++k)
        out.node_marginals(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(k)) =
            std::exp(b[k] - z);
    }
    out.edge_marginals.resize(net.num_edges() * c_ * c_);
    std::vector<double> joint(c_ * c_);
    for (std::size_t e = 0; e < net.num_edges(); ++e) {
      const auto& edge = net.edges()[e];
      const auto from_src = store_.variable_message(2 * e);
      const auto from_dst = store_.variable_message(2 * e + 1);
      for (std::size_t k = 0; k < c_; ++k)
        for (std::size_t l = 0; l < c_; ++l)
          joint[k * c_ + l] = from_src[k] + from_dst[l] +
                              theta_.gamma(edge.kind, static_cast<CategoryId>(k),
                                           static_cast<CategoryId>(l));
      const double z = log_sum_exp(joint);
      for (std::size_t i = 0; i < c_ * c_; ++i)
        out.edge_marginals[e * c_ * c_ + i] = std::exp(joint[i] - z);
    }
    return out;
  }

 private:
  // Beliefs from the current factor messages, then variable -> factor
  // messages as belief minus the recipient's own incoming message.
  void update_variable_messages() {
    const auto& net = model_.network();
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      double* b = belief_.data() + v * c_;
      std::copy_n(unary_.data() + v * c_, c_, b);
      for (const auto& inc : net.incident(v)) {
        const auto m = store_.factor_message(side_slot(inc));
        for (std::size_t k = 0; k < c_; ++k) b[k] += m[k];
      }
      for (const auto& inc : net.incident(v)) {
        const auto slot = side_slot(inc);
        const auto in = store_.factor_message(slot);
        auto out = store_.variable_message(slot);
        for (std::size_t k = 0; k < c_; ++k) out[k] = b[k] - in[k];
        shift_to_zero_max(out);
      }
    }
  }

  double update_factor_messages() {
    const auto& net = model_.network();
    const double keep = options_.damping;
    double residual = 0.0;
    for (std::size_t e = 0; e < net.num_edges(); ++e) {
      const auto& edge = net.edges()[e];
      for (int side = 0; side < 2; ++side) {
        // side 0: message to src, combining the dst's variable message
        const auto incoming = store_.variable_message(2 * e + (side == 0 ? 1 : 0));
        auto out = store_.factor_message(2 * e + static_cast<std::size_t>(side));
        std::vector<double>& update = scratch_;
        std::vector<double>& terms = terms_;
        for (std::size_t target = 0; target < c_; ++target) {
          for (std::size_t other = 0; other < c_; ++other) {
            const auto t = static_cast<CategoryId>(target);
            const auto o = static_cast<CategoryId>(other);
            const double g = side == 0 ? theta_.gamma(edge.kind, t, o) : theta_.gamma(edge.kind, o, t);
            terms[other] = g + incoming[other];
          }
          update[target] = semiring_ == Semiring::SumProduct
                               ? log_sum_exp(terms)
                               : *std::max_element(terms.begin(), terms.end());
        }
        shift_to_zero_max(update);
        for (std::size_t k = 0; k < c_; ++k) {
          residual = std::max(residual, std::abs(update[k] - out[k]));
          out[k] = (1.0 - keep) * update[k] + keep * out[k];
        }
        shift_to_zero_max(out);
      }
    }
    return residual;
  }

  const FactorModel& model_;
  const ParameterVector& theta_;
  LbpOptions options_;
  Semiring semiring_;
  std::size_t c_ = 0;
  std::vector<double> unary_;
  std::vector<double> belief_;
  std::vector<double> scratch_;
  std::vector<double> terms_;
  MessageStore store_;
  int sweeps_ = 0;
  bool converged_ = false;
};

}  // namespace

LbpResult sum_product(const FactorModel& model, const ParameterVector& theta, bool clamp_labels,
                      const LbpOptions& options) {
  Propagator bp(model, theta, clamp_labels, options, Semiring::SumProduct);
  bp.run();
  return bp.marginals();
}

LabelConfiguration max_sum_decode(const FactorModel& model, const ParameterVector& theta,
                                  bool clamp_labels, const LbpOptions& options) {
  Propagator bp(model, theta, clamp_labels, options, Semiring::MaxSum);
  bp.run();
  const auto& net = model.network();
  LabelConfiguration config(net.num_nodes(), 0);
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (clamp_labels && net.is_labeled(v)) {
      config[v] = net.label(v);
      continue;
    }
    const auto b = bp.belief(v);
    config[v] = static_cast<CategoryId>(std::max_element(b.begin(), b.end()) - b.begin());
  }
  return config;
}

SufficientStatistics expected_statistics(const FactorModel& model, const LbpResult& marginals) {
  const auto& net = model.network();
  const CategoryId c = model.num_categories();
  SufficientStatistics out(model.shape());
  for (NodeId v = 0; v < net.num_nodes(); ++v)
    for (CategoryId k = 0; k < c; ++k)
      model.accumulate_unary(out, v, k, marginals.node_marginals(v, k));
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    const auto kind = net.edges()[e].kind;
    for (CategoryId k = 0; k < c; ++k)
      for (CategoryId l = 0; l < c; ++l) out.gamma(kind, k, l) += marginals.edge_marginal(e, k, l);
  }
  return out;
}

}  // namespace ssfgm
