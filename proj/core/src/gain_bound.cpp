#include "l1adapt/gain_bound.hpp"

#include <algorithm>
#include <cmath>

#include "l1adapt/errors.hpp"
#include "l1adapt/lp.hpp"
#include "l1adapt/polynomial.hpp"
#include "l1adapt/rng.hpp"

namespace l1adapt {

namespace {

// Enumerate all dim-subsets of rows, keep feasible solutions of the active
// systems. Cheap for the handful-of-rows polytopes this is meant for.
std::vector<Eigen::VectorXd> enumerate_vertices(const Polyhedron& poly) {
  const int dim = poly.dim();
  const int rows = poly.rows();
  std::vector<Eigen::VectorXd> verts;
  std::vector<int> idx(dim);
  // Iterate over combinations of row indices.
  std::vector<int> comb(dim);
  for (int i = 0; i < dim; ++i) comb[i] = i;
  if (rows < dim) return verts;
  for (;;) {
    Eigen::MatrixXd As(dim, dim);
    Eigen::VectorXd cs(dim);
    for (int i = 0; i < dim; ++i) {
      As.row(i) = poly.A().row(comb[i]);
      cs(i) = poly.c()(comb[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(As);
    if (lu.isInvertible()) {
      Eigen::VectorXd v = lu.solve(cs);
      if (poly.contains(v, 1e-9)) verts.push_back(std::move(v));
    }
    // next combination
    int k = dim - 1;
    while (k >= 0 && comb[k] == rows - dim + k) --k;
    if (k < 0) break;
    ++comb[k];
    for (int j = k + 1; j < dim; ++j) comb[j] = comb[j - 1] + 1;
  }
  return verts;
}

double n_choose_k(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i) / (i + 1);
  return r;
}

}  // namespace

double l1_norm_upper_over_polytope(const Polyhedron& xi_polytope, std::size_t n,
                                   std::size_t m, GainBoundMethod method,
                                   int samples, std::uint64_t seed) {
  const int dim = xi_polytope.dim();
  if (static_cast<std::size_t>(dim) != n + m)
    throw Error("gain bound: polytope dimension != n + m");
  if (lp_minimize(Eigen::VectorXd::Zero(dim), xi_polytope).status ==
      LpStatus::infeasible)
    throw EmptyPolytope("gain bound: empty xi polytope");

  std::vector<Eigen::VectorXd> candidates;
  if (method == GainBoundMethod::vertex_sampling &&
      n_choose_k(xi_polytope.rows(), dim) <= 50000.0) {
    candidates = enumerate_vertices(xi_polytope);
  }
  if (candidates.empty() || method == GainBoundMethod::random_lp_directions) {
    SplitMix64 rng(seed);
    for (int s = 0; s < samples; ++s) {
      Eigen::VectorXd dir(dim);
      for (int i = 0; i < dim; ++i) dir(i) = rng.next_symmetric();
      if (dir.norm() < 1e-12) continue;
      LpSolution sol = lp_minimize(dir, xi_polytope);
      if (sol.status == LpStatus::optimal) candidates.push_back(sol.point);
    }
  }

  double best = 0.0;
  bool any = false;
  for (const auto& v : candidates) {
    std::vector<double> xi(v.data(), v.data() + v.size());
    try {
      best = std::max(best, xi_impulse_norm(xi, n, m).l1_norm);
      any = true;
    } catch (const NotMinimumPhase&) {
      // Candidate violates the minimum-phase assumption; skip it.
    }
  }
  if (!any) throw Error("gain bound: no minimum-phase candidate found");
  return best;
}

}  // namespace l1adapt
