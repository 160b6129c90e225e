#pragma once

#include <Eigen/Dense>

#include "l1adapt/polyhedron.hpp"

namespace l1adapt {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Eigen::VectorXd point;  // empty unless optimal
  double value = 0.0;     // meaningful only when optimal
  int iterations = 0;
};

/// min objective^T z over {z : A z >= c}, z free.
///
/// Dense two-phase primal simplex on the standard-form reformulation
/// (split free variables, slack per inequality). Dantzig pricing with a
/// Bland anti-cycling fallback when the objective stalls.
/// Throws IterationLimit past 50*(rows+cols) pivots.
LpSolution lp_minimize(const Eigen::VectorXd& objective, const Polyhedron& poly);

/// min (e^T z + f) / (g^T z + h) over poly, assuming the denominator is
/// positive on the feasible set. Charnes-Cooper transform: substitute
/// s = 1/(g^T z + h), r = s z, solve the LP in (r, s) with s >= sigma_min,
/// and map back z* = r*/s*.
///
/// sigma_min must be a valid lower bound on 1/(g^T z + h) over the feasible
/// set. The conservative default keeps the transform exact for any bounded
/// positive denominator, but a caller who knows the denominator is <= 1
/// should pass 1.0: a floor many orders below the solution scale invites
/// s collapsing into it numerically.
///
/// Throws DenominatorNotPositive if the denominator is not positive at the
/// returned point; LP statuses propagate through the returned solution.
LpSolution lfp_minimize(const Eigen::VectorXd& e, double f,
                        const Eigen::VectorXd& g, double h,
                        const Polyhedron& poly, double sigma_min = 1e-9);

}  // namespace l1adapt
