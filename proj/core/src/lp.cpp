#include "l1adapt/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "l1adapt/errors.hpp"

namespace l1adapt {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-10;
constexpr double kFeasTol = 1e-8;

// Revised simplex on standard form: min cost^T x, M x = b, x >= 0, b >= 0.
// The basis system is re-solved from the original data by LU factorization
// at every iteration; the problems in this library are small (at most a few
// hundred rows) and degenerate enough that the usual accumulated tableau
// updates drift into infeasible bases, so exactness wins over speed here.
//
// Columns flagged in `blocked` may never enter the basis (artificials after
// phase I). With skip_unbounded_columns (phase I, whose objective is bounded
// below by construction), a column with no eligible pivot row is numerical
// noise and is excluded for the rest of the phase.
struct Simplex {
  const Eigen::MatrixXd& M;
  const Eigen::VectorXd& b;
  std::vector<int> basis;
  std::vector<char> blocked;
  std::vector<char> in_basis;
  Eigen::VectorXd x_basic;
  int iterations = 0;
  int iter_cap;

  Simplex(const Eigen::MatrixXd& M_, const Eigen::VectorXd& b_,
          std::vector<int> basis_, int cap)
      : M(M_),
        b(b_),
        basis(std::move(basis_)),
        blocked(M_.cols(), 0),
        in_basis(M_.cols(), 0),
        iter_cap(cap) {
    for (int j : basis) in_basis[j] = 1;
  }

  // Min-ratio leaving row over pivots above `eligible`; near-tied rows are
  // resolved toward the largest pivot element (best conditioning) or, under
  // Bland's rule, the smallest basis index.
  int choose_leaving_at(const Eigen::VectorXd& w, bool bland,
                        double eligible) const {
    const int m = static_cast<int>(basis.size());
    double min_ratio = -1.0;
    for (int i = 0; i < m; ++i) {
      if (w(i) > eligible) {
        const double ratio = std::max(x_basic(i), 0.0) / w(i);
        if (min_ratio < 0.0 || ratio < min_ratio) min_ratio = ratio;
      }
    }
    if (min_ratio < 0.0) return -1;
    const double tie = min_ratio + 1e-9 * (1.0 + min_ratio);
    int row = -1;
    for (int i = 0; i < m; ++i) {
      if (w(i) > eligible && std::max(x_basic(i), 0.0) / w(i) <= tie) {
        if (row < 0 || (bland ? basis[i] < basis[row] : w(i) > w(row)))
          row = i;
      }
    }
    return row;
  }

  int choose_leaving(const Eigen::VectorXd& w, bool bland) const {
    // The large-pivot preference would break Bland's termination guarantee,
    // so the anti-cycling mode uses the textbook rule on all eligible rows.
    if (bland) return choose_leaving_at(w, true, kPivotTol);
    const int row = choose_leaving_at(w, false, 1e-7);
    return row >= 0 ? row : choose_leaving_at(w, false, kPivotTol);
  }

  // Returns true on optimal, false on unbounded.
  bool run(const Eigen::VectorXd& cost, bool skip_unbounded_columns) {
    const int m = static_cast<int>(basis.size());
    const int n = static_cast<int>(M.cols());
    Eigen::MatrixXd B(m, m);
    int stall = 0;
    bool bland = false;
    double last_obj = std::numeric_limits<double>::infinity();
    for (;;) {
      for (int i = 0; i < m; ++i) B.col(i) = M.col(basis[i]);
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
      x_basic = lu.solve(b);
      Eigen::VectorXd cb(m);
      for (int i = 0; i < m; ++i) cb(i) = cost(basis[i]);
      const Eigen::VectorXd y = lu.transpose().solve(cb);

      // Entering column: most negative reduced cost (or first, under Bland).
      int col = -1;
      double most_neg = -kReducedCostTol;
      for (int j = 0; j < n; ++j) {
        if (blocked[j] || in_basis[j]) continue;
        const double d = cost(j) - M.col(j).dot(y);
        if (d < -kReducedCostTol) {
          if (bland) {
            col = j;
            break;
          }
          if (d < most_neg) {
            most_neg = d;
            col = j;
          }
        }
      }
      if (col < 0) return true;  // optimal

      const Eigen::VectorXd w = lu.solve(M.col(col));
      // A basic blocked column (artificial kept at zero after phase I) must
      // never grow: a step against a row with w < 0 would raise it and the
      // returned point would solve a relaxed system, not this one. Pivot the
      // artificial out instead; the entering variable comes in at level zero
      // and the basis stays nonsingular because the pivot entry is nonzero.
      int row = -1;
      double w_neg = -kPivotTol;
      for (int i = 0; i < m; ++i)
        if (blocked[basis[i]] && w(i) < w_neg) {
          w_neg = w(i);
          row = i;
        }
      if (row < 0) row = choose_leaving(w, bland);
      if (row < 0) {
        if (skip_unbounded_columns) {
          blocked[col] = 2;
          continue;
        }
        return false;  // unbounded
      }
      in_basis[basis[row]] = 0;
      in_basis[col] = 1;
      basis[row] = col;

      if (++iterations > iter_cap)
        throw IterationLimit("simplex iteration cap exceeded");
      const double obj = cb.dot(x_basic);
      if (obj < last_obj - 1e-12) {
        stall = 0;
        bland = false;
        last_obj = obj;
      } else if (++stall > 50) {
        bland = true;  // anti-cycling
      }
    }
  }

  double objective(const Eigen::VectorXd& cost) const {
    double v = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i)
      v += cost(basis[i]) * x_basic(i);
    return v;
  }
};

// min c^T z over {Ai z >= bi, Ae z = be}, z free. Equalities are encoded as
// opposite inequality pairs so that every row carries a slack variable; the
// single shared simplex path proved much better conditioned than a separate
// slackless equality row.
LpSolution solve_general(const Eigen::VectorXd& c, const Eigen::MatrixXd& Ai,
                         const Eigen::VectorXd& bi, const Eigen::MatrixXd& Ae,
                         const Eigen::VectorXd& be) {
  const int dim = static_cast<int>(c.size());
  const int mi = static_cast<int>(Ai.rows());
  const int me = static_cast<int>(Ae.rows());
  const int m = mi + 2 * me;
  const int nstruct = 2 * dim + m;  // z+, z-, slacks
  const int n = nstruct + m;        // + artificials
  const int cap = 50 * (m + n);

  // Standard form rows: [A, -A, -I | rhs], flipped so rhs >= 0 and
  // equilibrated to unit inf-norm; mixed-magnitude constraint systems would
  // otherwise defeat the fixed feasibility tolerance.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m, n);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd arow;
    double rhs;
    if (i < mi) {
      arow = Ai.row(i).transpose();
      rhs = bi(i);
    } else {
      const int k = (i - mi) / 2;
      const double sgn = (i - mi) % 2 == 0 ? 1.0 : -1.0;
      arow = sgn * Ae.row(k).transpose();
      rhs = sgn * be(k);
    }
    double slack = -1.0;
    const double row_scale = std::max(arow.cwiseAbs().maxCoeff(), std::abs(rhs));
    if (row_scale > 0.0) {
      arow /= row_scale;
      rhs /= row_scale;
    }
    if (rhs < 0.0) {
      arow = -arow;
      rhs = -rhs;
      slack = -slack;
    }
    M.block(i, 0, 1, dim) = arow.transpose();
    M.block(i, dim, 1, dim) = -arow.transpose();
    M(i, 2 * dim + i) = slack;
    M(i, nstruct + i) = 1.0;  // artificial
    b(i) = rhs;
  }

  // Column equilibration z_j = x_j / colscale_j on top of the row scaling.
  Eigen::VectorXd colscale = Eigen::VectorXd::Ones(n);
  for (int j = 0; j < nstruct; ++j) {
    const double s = M.col(j).cwiseAbs().maxCoeff();
    if (s > 1e-8) {
      colscale(j) = s;
      M.col(j) /= s;
    }
  }

  // Initial basis: the slack column whenever it is feasible as a basic
  // variable (slack +1, or rhs zero), the artificial otherwise. Most rows of
  // the problems in this library are homogeneous, so this leaves phase I
  // with only a handful of artificials to clear.
  std::vector<int> start(m);
  for (int i = 0; i < m; ++i) {
    const bool slack_ok = M(i, 2 * dim + i) > 0.0 || b(i) == 0.0;
    start[i] = slack_ok ? 2 * dim + i : nstruct + i;
  }
  Simplex simplex(M, b, std::move(start), cap);

  // Phase I: minimize the sum of artificials.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n);
  phase1.tail(m).setOnes();
  simplex.run(phase1, /*skip_unbounded_columns=*/true);
  for (auto& flag : simplex.blocked)
    if (flag == 2) flag = 0;

  // Equilibrated rows have rhs in [0, 1], so the artificial residual is
  // compared against a tolerance linear in the row count.
  if (simplex.objective(phase1) > kFeasTol * (1.0 + m))
    return {LpStatus::infeasible, {}, 0.0, simplex.iterations};

  // Any artificial still basic sits at (numerical) zero; it stays blocked
  // from re-entering and is harmless in phase II.
  for (int j = nstruct; j < n; ++j) simplex.blocked[j] = 1;

  // Phase II: the true objective on the structural split variables,
  // rescaled to the equilibrated columns.
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n);
  phase2.head(dim) = c;
  phase2.segment(dim, dim) = -c;
  phase2.array() /= colscale.array();
  if (!simplex.run(phase2, /*skip_unbounded_columns=*/false))
    return {LpStatus::unbounded, {}, 0.0, simplex.iterations};

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) x(simplex.basis[i]) = simplex.x_basic(i);
  x.array() /= colscale.array();
  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.point = x.head(dim) - x.segment(dim, dim);
  sol.value = c.dot(sol.point);
  sol.iterations = simplex.iterations;
  return sol;
}

}  // namespace

LpSolution lp_minimize(const Eigen::VectorXd& objective, const Polyhedron& poly) {
  if (objective.size() != poly.dim()) throw Error("lp_minimize: dimension mismatch");
  return solve_general(objective, poly.A(), poly.c(), Eigen::MatrixXd(0, poly.dim()),
                       Eigen::VectorXd(0));
}

LpSolution lfp_minimize(const Eigen::VectorXd& e, double f,
                        const Eigen::VectorXd& g, double h,
                        const Polyhedron& poly, double sigma_min) {
  const int dim = poly.dim();
  if (e.size() != dim || g.size() != dim)
    throw Error("lfp_minimize: dimension mismatch");
  if (sigma_min <= 0.0) throw Error("lfp_minimize: sigma_min must be positive");

  // Variables (r, s); A r - c s >= 0, s >= sigma_min; g^T r + h s = 1.
  Eigen::MatrixXd Ai(poly.rows() + 1, dim + 1);
  Ai.topLeftCorner(poly.rows(), dim) = poly.A();
  Ai.col(dim).head(poly.rows()) = -poly.c();
  Ai.row(poly.rows()).setZero();
  Ai(poly.rows(), dim) = 1.0;
  Eigen::VectorXd bi = Eigen::VectorXd::Zero(poly.rows() + 1);
  bi(poly.rows()) = sigma_min;

  Eigen::MatrixXd Ae(1, dim + 1);
  Ae.leftCols(dim) = g.transpose();
  Ae(0, dim) = h;
  Eigen::VectorXd be = Eigen::VectorXd::Ones(1);

  Eigen::VectorXd obj(dim + 1);
  obj.head(dim) = e;
  obj(dim) = f;

  LpSolution lp = solve_general(obj, Ai, bi, Ae, be);
  if (lp.status != LpStatus::optimal) return lp;

  const double s = lp.point(dim);
  if (!lp.point.allFinite() || s < 0.5 * sigma_min)
    throw Error("lfp_minimize: Charnes-Cooper scale collapsed");
  Eigen::VectorXd z = lp.point.head(dim) / s;
  const double den = g.dot(z) + h;
  if (den <= 0.0)
    throw DenominatorNotPositive("lfp_minimize: denominator <= 0 at optimum");
  LpSolution out;
  out.status = LpStatus::optimal;
  out.point = std::move(z);
  out.value = (e.dot(out.point) + f) / den;
  out.iterations = lp.iterations;
  return out;
}

}  // namespace l1adapt
