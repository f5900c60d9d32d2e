#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "soc/errors.hpp"
#include "soc/graph.hpp"
#include "soc/scores.hpp"
#include "soc/spectral.hpp"
#include "soc/state_space.hpp"

namespace soc {

struct KatzParams {
  double alpha = 0.0;
  double tol = 1e-10;
  std::size_t max_iter = 10'000;
};

// Usable damping factors are alpha < max_alpha = 1 / lambda_max.
struct AlphaBound {
  double max_alpha = std::numeric_limits<double>::infinity();
  double lambda_max = 0.0;
  bool nilpotent = false;
  bool converged = true;
};

class AlphaOutOfRange : public NumericalError {
 public:
  AlphaOutOfRange(double alpha, AlphaBound bound)
      : NumericalError("damping factor " + format_double(alpha) + " must lie in (0, " +
                       format_double(bound.max_alpha) + ")"),
        bound_(bound) {}
  const AlphaBound& bound() const noexcept { return bound_; }

 private:
  AlphaBound bound_;
};

class SeriesDiverged : public NumericalError {
 public:
  SeriesDiverged(std::size_t iterations, std::vector<double> partial)
      : NumericalError("Katz series did not converge within " + std::to_string(iterations) + " iterations"),
        partial_(std::move(partial)) {}
  const std::vector<double>& partial_sums() const noexcept { return partial_; }

 private:
  std::vector<double> partial_;
};

inline AlphaBound alpha_bound_from(const SpectralEstimate& est) {
  AlphaBound b;
  b.lambda_max = est.value;
  b.nilpotent = est.nilpotent;
  b.converged = est.converged;
  b.max_alpha = est.nilpotent || est.value <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / est.value;
  return b;
}

inline AlphaBound max_alpha(const StateGraph& sg, double tol = 1e-10) {
  if (sg.starred()) throw std::invalid_argument("max_alpha: state graph must not be starred");
  return alpha_bound_from(spectral_radius(sg.adjacency(), tol));
}

// 1 / lambda_max of the state-graph operator; +inf when it is nilpotent.
inline AlphaBound max_alpha(const SocInstance& inst, double tol = 1e-10) {
  return max_alpha(StateGraph(inst, false), tol);
}

namespace detail {

// sum_k alpha^k M^k 1 by Neumann accumulation; M applied as a row action over adj.
inline std::vector<double> neumann_row_sums(const Adjacency& adj, const KatzParams& p) {
  const std::size_t dim = adj.size();
  std::vector<double> term(dim, 1.0), next(dim), sum(dim, 1.0);
  for (std::size_t it = 1; it <= p.max_iter; ++it) {
    double term_norm = 0.0;
    for (StateId a = 0; a < dim; ++a) {
      double acc = 0.0;
      for (NodeId b : adj.out(a)) acc += term[b];
      next[a] = p.alpha * acc;
      term_norm = std::max(term_norm, next[a]);
    }
    for (std::size_t a = 0; a < dim; ++a) sum[a] += next[a];
    term.swap(next);
    if (term_norm < p.tol) return sum;
    if (!std::isfinite(term_norm)) break;
  }
  throw SeriesDiverged(p.max_iter, std::move(sum));
}

inline void check_alpha(double alpha, const AlphaBound& bound) {
  if (!(alpha > 0.0) || (!bound.nilpotent && alpha >= bound.max_alpha)) throw AlphaOutOfRange(alpha, bound);
}

}  // namespace detail

// Row sums of Z^T (I - alpha B)^{-1} I_kappa: weighted counts of feasible walks
// leaving each node at full charge, the empty walk included.
inline ScoreVector soc_katz(const SocInstance& inst, const KatzParams& p) {
  const StateGraph sg(inst, false);
  detail::check_alpha(p.alpha, max_alpha(sg));
  const std::vector<double> lifted = detail::neumann_row_sums(sg.adjacency(), p);
  ScoreVector out;
  const std::size_t n = inst.node_count();
  out.values.assign(lifted.begin(), lifted.begin() + static_cast<std::ptrdiff_t>(n));  // block 0 == soc kappa
  out.meta.measure = "soc-katz";
  out.meta.params = {{"alpha", p.alpha}, {"kappa", inst.kappa()}, {"tol", p.tol}};
  return out;
}

// Row sums of (I - alpha A)^{-1}.
inline ScoreVector standard_katz(const Graph& g, double alpha, double tol = 1e-10, std::size_t max_iter = 10'000) {
  detail::check_alpha(alpha, alpha_bound_from(spectral_radius(g.arcs(), tol)));
  ScoreVector out;
  out.values = detail::neumann_row_sums(g.arcs(), KatzParams{alpha, tol, max_iter});
  out.meta.measure = "katz";
  out.meta.params = {{"alpha", alpha}, {"tol", tol}};
  return out;
}

}  // namespace soc
