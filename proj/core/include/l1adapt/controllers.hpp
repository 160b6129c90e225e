#pragma once

#include <vector>

#include <Eigen/Dense>

#include "l1adapt/estimator.hpp"
#include "l1adapt/plant.hpp"
#include "l1adapt/polyhedron.hpp"

namespace l1adapt {

/// Certainty-equivalence optimal control law
/// u_t = (sum_i a_i y_{t+1-i} - sum_{j>=2} b_j u_{t+1-j}) / b_1
/// evaluated at the coefficient vector xi. With the true xi this makes
/// y_{t+1} = v_{t+1} identically.
double control_optimal(const Eigen::VectorXd& xi, std::size_t n, std::size_t m,
                       const PlantState& state);
double control_optimal(const std::vector<double>& xi, std::size_t n,
                       std::size_t m, const PlantState& state);

struct AdaptiveControl {
  double u = 0.0;
  bool cut = false;
};

/// Adaptive control with cutting: preliminary input from the current
/// estimate, clamped to |u| <= |G^{xi_t}| * max|y| over [t+mu-mu_bar, t].
/// Requires mu_bar >= 2 mu.
AdaptiveControl control_adaptive(const SetEstimator& est,
                                 const PlantState& state, int mu, long mu_bar);

/// Euclidean projection onto {z : A z >= c} by Dykstra's alternating
/// projections over the halfspace list. Throws ProjectionNotConverged past
/// the sweep cap.
Eigen::VectorXd project_onto_polytope(const Eigen::VectorXd& x,
                                      const Polyhedron& poly,
                                      double move_tol = 1e-10,
                                      int max_sweeps = 10000);

/// Recursive-least-squares baseline state.
struct RlsState {
  Eigen::VectorXd xi_hat;
  Eigen::MatrixXd P;

  static RlsState initial(const Eigen::VectorXd& xi0, double p0_scale);
};

/// One RLS step with projection of the estimate back onto Xi:
/// K = P phi / (1 + phi^T P phi), xi <- Pr_Xi(xi + K (y - xi^T phi)),
/// P <- (I - K phi^T) P.
RlsState rls_step(const RlsState& rls, const Eigen::VectorXd& phi,
                  double y_next, const Polyhedron& xi_polytope);

}  // namespace l1adapt
