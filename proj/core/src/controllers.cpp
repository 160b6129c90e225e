#include "l1adapt/controllers.hpp"

#include <cmath>

#include "l1adapt/errors.hpp"

namespace l1adapt {

double control_optimal(const Eigen::VectorXd& xi, std::size_t n, std::size_t m,
                       const PlantState& state) {
  const long t = state.t();
  const double b1 = xi(static_cast<Eigen::Index>(n));
  if (b1 == 0.0) throw Error("control: b_1 = 0");
  double acc = 0.0;
  for (std::size_t i = 1; i <= n; ++i)
    acc += xi(static_cast<Eigen::Index>(i - 1)) *
           state.y(t + 1 - static_cast<long>(i));
  for (std::size_t j = 2; j <= m; ++j)
    acc -= xi(static_cast<Eigen::Index>(n + j - 1)) *
           state.u(t + 1 - static_cast<long>(j));
  return acc / b1;
}

double control_optimal(const std::vector<double>& xi, std::size_t n,
                       std::size_t m, const PlantState& state) {
  return control_optimal(
      Eigen::Map<const Eigen::VectorXd>(xi.data(),
                                        static_cast<Eigen::Index>(xi.size())),
      n, m, state);
}

AdaptiveControl control_adaptive(const SetEstimator& est,
                                 const PlantState& state, int mu, long mu_bar) {
  if (mu_bar < 2L * mu) throw Error("control: mu_bar must be >= 2 mu");
  AdaptiveControl out;
  out.u = control_optimal(est.zeta().xi_hat, est.n(), est.m(), state);
  const long t = state.t();
  const double bound =
      est.g_norm_current() * state.window_max_y(t + mu - mu_bar, t);
  if (std::abs(out.u) > bound) {
    out.u = sign_pm(out.u) * bound;
    out.cut = true;
  }
  return out;
}

Eigen::VectorXd project_onto_polytope(const Eigen::VectorXd& x,
                                      const Polyhedron& poly, double move_tol,
                                      int max_sweeps) {
  const int rows = poly.rows();
  if (poly.contains(x, 1e-12)) return x;
  Eigen::VectorXd z = x;
  Eigen::MatrixXd corrections = Eigen::MatrixXd::Zero(rows, poly.dim());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 0; i < rows; ++i) {
      const Eigen::VectorXd before = z + corrections.row(i).transpose();
      const Eigen::VectorXd a = poly.A().row(i).transpose();
      const double nrm2 = a.squaredNorm();
      Eigen::VectorXd after = before;
      if (nrm2 > 0.0) {
        const double deficit = poly.c()(i) - a.dot(before);
        if (deficit > 0.0) after += (deficit / nrm2) * a;
      }
      corrections.row(i) = (before - after).transpose();
      moved = std::max(moved, (after - z).cwiseAbs().maxCoeff());
      z = after;
    }
    if (moved < move_tol && poly.contains(z, 1e-8)) return z;
  }
  throw ProjectionNotConverged("Dykstra projection exceeded the sweep cap");
}

RlsState RlsState::initial(const Eigen::VectorXd& xi0, double p0_scale) {
  RlsState s;
  s.xi_hat = xi0;
  s.P = p0_scale * Eigen::MatrixXd::Identity(xi0.size(), xi0.size());
  return s;
}

RlsState rls_step(const RlsState& rls, const Eigen::VectorXd& phi,
                  double y_next, const Polyhedron& xi_polytope) {
  RlsState out;
  const Eigen::VectorXd p_phi = rls.P * phi;
  const Eigen::VectorXd gain = p_phi / (1.0 + phi.dot(p_phi));
  const Eigen::VectorXd raw =
      rls.xi_hat + gain * (y_next - rls.xi_hat.dot(phi));
  out.xi_hat = project_onto_polytope(raw, xi_polytope);
  out.P = rls.P - gain * p_phi.transpose();
  // Symmetrize against rounding drift.
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return out;
}

}  // namespace l1adapt
