#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "l1adapt/lp.hpp"
#include "l1adapt/plant.hpp"
#include "l1adapt/polyhedron.hpp"

namespace l1adapt {

/// Reparameterized estimate zeta = (xi_hat, delta_w_hat, delta_hat) with
/// delta_hat standing for delta_y + delta_u * |G|.
struct EstimateVector {
  Eigen::VectorXd xi_hat;
  double delta_w_hat = 0.0;
  double delta_hat = 0.0;

  /// I(zeta) = delta_w_hat / (1 - delta_hat), the unfalsified criterion value.
  double criterion() const { return delta_w_hat / (1.0 - delta_hat); }

  Eigen::VectorXd stacked() const;
  static EstimateVector from_stacked(const Eigen::VectorXd& z);
};

/// Data inequality in the half-space form psi^T zeta >= nu.
struct RegressorRecord {
  Eigen::VectorXd phi;  // (-y_t ... -y_{t-n+1}, u_t ... u_{t-m+1})
  double eta = 1.0;     // sign of the prediction residual, sign(0) = +1
  Eigen::VectorXd psi;  // (eta * phi, 1, p_{t+1})
  double nu = 0.0;      // eta * y_{t+1}
  double p_next = 0.0;  // p_{t+1} = max |y| over the last mu_bar outputs
};

/// psi^T zeta < nu - eps |psi| (Euclidean norm), i.e. the new data
/// inequality misses the current estimate by more than the dead zone.
bool dead_zone_violated(const RegressorRecord& rec, const EstimateVector& zeta,
                        double eps);

enum class EpsMode { fixed_eps, adaptive_eps };

/// Parameters of the adaptive dead-zone schedule: target absolute accuracy E
/// while I = 0, relative accuracy kappa > 1 afterwards, and the stability
/// slack delta_bar < varkappa < 1.
struct EpsSchedule {
  double E = 0.1;
  double kappa = 1.1;
  double varkappa = 0.97;
};

/// One evaluation of the schedule; prev_eps enters the K constant (the
/// schedule is defined with a one-step lag in eps). Pure, exposed for tests.
double adaptive_eps_value(const EstimateVector& zeta, double g_norm,
                          double prev_eps, const EpsSchedule& sched,
                          double delta_bar);

/// Dead-zone set-membership estimator over zeta-space (dimension n+m+2):
/// keeps the polyhedral estimate Z_t, the optimal vector estimate zeta_t
/// (argmin of I over Z_t via linear-fractional programming), and the
/// dead-zone parameter.
class SetEstimator {
public:
  /// xi_polytope is the a-priori polytope over xi (dimension n+m); Z_0
  /// extends it with delta_w_hat >= 0 and 0 <= delta_hat <= delta_bar.
  /// xi0 must lie in the polytope.
  SetEstimator(const Polyhedron& xi_polytope, std::size_t n, std::size_t m,
               double delta_bar, Eigen::VectorXd xi0, EpsMode mode,
               double fixed_eps, EpsSchedule schedule = {});

  const EstimateVector& zeta() const { return zeta_; }
  const Polyhedron& Z() const { return Z_; }
  double eps() const { return eps_; }
  int update_count() const { return update_count_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  double delta_bar() const { return delta_bar_; }
  EpsMode mode() const { return mode_; }

  /// Memoized l1 norm of the controller transfer function at xi.
  double g_norm(const Eigen::VectorXd& xi) const;
  /// Norm at the current estimate xi_t.
  double g_norm_current() const { return g_norm(zeta_.xi_hat); }

  /// Assemble the data inequality from the advanced state (y up to t+1,
  /// u up to t). Uses the current estimate for the residual sign.
  RegressorRecord build_regressor(const PlantState& state, long mu_bar) const;

  bool dead_zone_violated(const RegressorRecord& rec) const {
    return l1adapt::dead_zone_violated(rec, zeta_, eps_);
  }

  /// Cut Z with the data inequality and re-optimize zeta. Caller contract:
  /// only invoked when the dead zone was violated. Throws Falsified when the
  /// intersection becomes empty.
  ///
  /// The minimizer of I over Z_t is usually non-unique (I depends only on
  /// the last two coordinates), and the guarantees hold for any minimizer.
  /// Among them this picks the one with the largest normalized slack against
  /// the recorded data inequalities, which keeps xi_t away from polytope
  /// vertices and makes the estimate far less likely to be falsified by the
  /// next measurement than an arbitrary vertex of the optimal face.
  void update(const RegressorRecord& rec);

  /// Recompute eps_t from the current estimate (adaptive mode only; no-op
  /// for fixed mode).
  void refresh_eps();

private:
  std::size_t n_, m_;
  double delta_bar_;
  EpsMode mode_;
  EpsSchedule sched_;
  Polyhedron Z_;
  int apriori_rows_ = 0;  // leading rows of Z_ that carry no data margin
  EstimateVector zeta_;
  double eps_;
  int update_count_ = 0;
  mutable std::map<std::vector<double>, double> g_norm_cache_;
};

/// Unfalsified-membership test: does the estimate
/// (xi_hat, delta_w, delta_y, delta_u) satisfy the data inequalities
/// |a_hat y_{k+1} - b_hat u_k| <= delta_w + delta_y p^y_{k+1} + delta_u p^u_{k+1}
/// for every k in [from, to)?
bool membership_diagnostic(const Eigen::VectorXd& xi_hat, double delta_w,
                           double delta_y, double delta_u, std::size_t n,
                           std::size_t m, int mu, const PlantState& state,
                           long from, long to);

/// Largest residual-over-envelope excess on the window; the smallest
/// delta_w that makes the membership test pass with the given gains.
double max_residual(const Eigen::VectorXd& xi_hat, double delta_y,
                    double delta_u, std::size_t n, std::size_t m, int mu,
                    const PlantState& state, long from, long to);

enum class FalsificationStatus { ok, falsified };

/// Model check against the designer's cap J_*.
FalsificationStatus falsification_check(double criterion_value, double j_star);

}  // namespace l1adapt
