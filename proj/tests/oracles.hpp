#pragma once

// Test-only reference implementations, deliberately independent of the
// library's algorithms: eigenvalue-based root extraction instead of the
// Jury recursion, and exhaustive vertex enumeration instead of simplex.

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "l1adapt/polyhedron.hpp"
#include "l1adapt/polynomial.hpp"
#include "l1adapt/rng.hpp"

namespace oracles {

/// Roots of c_0 + c_1 x + ... + c_d x^d via the companion matrix.
inline std::vector<std::complex<double>> poly_roots(
    const std::vector<double>& coeffs) {
  std::size_t d = coeffs.size();
  while (d > 1 && coeffs[d - 1] == 0.0) --d;
  if (d <= 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d - 1),
                                               static_cast<Eigen::Index>(d - 1));
  for (std::size_t i = 0; i + 1 < d - 1; ++i)
    comp(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
  for (std::size_t i = 0; i < d - 1; ++i)
    comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 2)) =
        -coeffs[i] / coeffs[d - 1];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    roots.push_back(es.eigenvalues()(i));
  return roots;
}

/// Smallest root modulus; +inf when the polynomial has no roots.
inline double min_root_modulus(const std::vector<double>& coeffs) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : poly_roots(coeffs)) best = std::min(best, std::abs(r));
  return best;
}

/// All vertices of {z : A z >= c}: every maximal-rank d-subset of tight rows
/// whose solution satisfies the remaining inequalities. Intended for small
/// instances (d <= 4, <= 10 rows).
inline std::vector<Eigen::VectorXd> enumerate_vertices(
    const l1adapt::Polyhedron& poly, double tol = 1e-7) {
  const int d = poly.dim();
  const int r = poly.rows();
  std::vector<Eigen::VectorXd> verts;
  std::vector<int> idx(static_cast<std::size_t>(d));
  // Iterate over all d-combinations of row indices.
  for (int i = 0; i < d; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (r < d) return verts;
  while (true) {
    Eigen::MatrixXd M(d, d);
    Eigen::VectorXd rhs(d);
    for (int i = 0; i < d; ++i) {
      M.row(i) = poly.A().row(idx[static_cast<std::size_t>(i)]);
      rhs(i) = poly.c()(idx[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.isInvertible()) {
      Eigen::VectorXd z = lu.solve(rhs);
      if (z.allFinite() && poly.violation(z) <= tol) verts.push_back(z);
    }
    // Next combination.
    int k = d - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == r - d + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int i = k + 1; i < d; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return verts;
}

/// min objective^T z over the vertex set (valid for bounded polyhedra).
inline double lp_vertex_min(const Eigen::VectorXd& objective,
                            const std::vector<Eigen::VectorXd>& verts) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : verts) best = std::min(best, objective.dot(v));
  return best;
}

/// min (e^T z + f)/(g^T z + h) over the vertex set. A linear-fractional
/// function with positive denominator is quasilinear, so its minimum over a
/// bounded polyhedron sits at a vertex.
inline double lfp_vertex_min(const Eigen::VectorXd& e, double f,
                             const Eigen::VectorXd& g, double h,
                             const std::vector<Eigen::VectorXd>& verts) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : verts)
    best = std::min(best, (e.dot(v) + f) / (g.dot(v) + h));
  return best;
}

/// Random bounded polyhedron: a box |z_i| <= B plus extra halfspaces kept
/// nonempty by anchoring them to an interior point.
struct RandomPolyhedron {
  l1adapt::Polyhedron poly;
  double box_radius = 1.0;
  Eigen::VectorXd interior;
};

inline RandomPolyhedron random_bounded_polyhedron(l1adapt::SplitMix64& rng,
                                                  int max_dim = 4,
                                                  int max_rows = 10) {
  const int d = 1 + static_cast<int>(rng.next_u64() %
                                     static_cast<std::uint64_t>(max_dim));
  const double B = 1.0 + 4.0 * rng.next_unit();
  l1adapt::Polyhedron poly(d);
  Eigen::VectorXd z0(d);
  for (int i = 0; i < d; ++i) z0(i) = 0.5 * B * rng.next_symmetric();
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd ei = Eigen::VectorXd::Zero(d);
    ei(i) = 1.0;
    poly.add_halfspace(ei, -B);
    poly.add_halfspace(-ei, -B);
  }
  const int extra_cap = max_rows - 2 * d;
  const int extra =
      extra_cap > 0
          ? static_cast<int>(rng.next_u64() %
                             static_cast<std::uint64_t>(extra_cap + 1))
          : 0;
  for (int k = 0; k < extra; ++k) {
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a(i) = rng.next_symmetric();
    if (a.norm() < 1e-3) a(0) = 1.0;
    // a^T z >= a^T z0 - slack keeps z0 strictly feasible.
    poly.add_halfspace(a, a.dot(z0) - (0.1 + B * rng.next_unit()));
  }
  return {std::move(poly), B, std::move(z0)};
}

}  // namespace oracles
