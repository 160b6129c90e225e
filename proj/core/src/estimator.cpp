#include "l1adapt/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "l1adapt/errors.hpp"
#include "l1adapt/polynomial.hpp"

namespace l1adapt {

namespace {
constexpr double kEpsFloor = 1e-8;  // protects the LP conditioning
}

Eigen::VectorXd EstimateVector::stacked() const {
  Eigen::VectorXd z(xi_hat.size() + 2);
  z.head(xi_hat.size()) = xi_hat;
  z(xi_hat.size()) = delta_w_hat;
  z(xi_hat.size() + 1) = delta_hat;
  return z;
}

EstimateVector EstimateVector::from_stacked(const Eigen::VectorXd& z) {
  EstimateVector v;
  v.xi_hat = z.head(z.size() - 2);
  v.delta_w_hat = z(z.size() - 2);
  v.delta_hat = z(z.size() - 1);
  return v;
}

bool dead_zone_violated(const RegressorRecord& rec, const EstimateVector& zeta,
                        double eps) {
  return rec.psi.dot(zeta.stacked()) < rec.nu - eps * rec.psi.norm();
}

double adaptive_eps_value(const EstimateVector& zeta, double g_norm,
                          double prev_eps, const EpsSchedule& sched,
                          double delta_bar) {
  if (sched.varkappa <= delta_bar)
    throw ScheduleUndefined("adaptive dead zone requires varkappa > delta_bar");
  const double two_plus_g = 2.0 + g_norm;
  double eps;
  if (zeta.criterion() == 0.0) {
    eps = (1.0 - zeta.delta_hat) / (1.0 + sched.E * two_plus_g) * sched.E;
  } else {
    const double den = 1.0 - zeta.delta_hat - prev_eps * two_plus_g;
    const double k_zeta = (1.0 + zeta.delta_w_hat * two_plus_g) / (den * den);
    eps = std::min((sched.varkappa - delta_bar) / two_plus_g,
                   (sched.kappa - 1.0) * zeta.criterion() / k_zeta);
  }
  return std::max(eps, kEpsFloor);
}

SetEstimator::SetEstimator(const Polyhedron& xi_polytope, std::size_t n,
                           std::size_t m, double delta_bar,
                           Eigen::VectorXd xi0, EpsMode mode, double fixed_eps,
                           EpsSchedule schedule)
    : n_(n),
      m_(m),
      delta_bar_(delta_bar),
      mode_(mode),
      sched_(schedule),
      Z_(static_cast<int>(n + m + 2)) {
  if (xi_polytope.dim() != static_cast<int>(n + m))
    throw Error("estimator: xi polytope dimension != n + m");
  if (delta_bar <= 0.0 || delta_bar >= 1.0)
    throw Error("estimator: delta_bar must lie in (0, 1)");
  if (mode == EpsMode::adaptive_eps && sched_.varkappa <= delta_bar)
    throw ScheduleUndefined("adaptive dead zone requires varkappa > delta_bar");

  const int dim = Z_.dim();
  // Xi rows extended with zeros on (delta_w_hat, delta_hat).
  for (int i = 0; i < xi_polytope.rows(); ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(dim);
    row.head(xi_polytope.dim()) = xi_polytope.A().row(i).transpose();
    Z_.add_halfspace(row, xi_polytope.c()(i));
  }
  Eigen::VectorXd e_w = Eigen::VectorXd::Zero(dim);
  e_w(dim - 2) = 1.0;
  Z_.add_halfspace(e_w, 0.0);  // delta_w_hat >= 0
  Eigen::VectorXd e_d = Eigen::VectorXd::Zero(dim);
  e_d(dim - 1) = 1.0;
  Z_.add_halfspace(e_d, 0.0);           // delta_hat >= 0
  Z_.add_halfspace(-e_d, -delta_bar_);  // delta_hat <= delta_bar

  apriori_rows_ = Z_.rows();

  zeta_.xi_hat = std::move(xi0);
  if (zeta_.xi_hat.size() != static_cast<Eigen::Index>(n + m))
    throw Error("estimator: xi0 dimension != n + m");
  zeta_.delta_w_hat = 0.0;
  zeta_.delta_hat = 0.0;

  if (mode_ == EpsMode::fixed_eps) {
    if (fixed_eps <= 0.0) throw Error("estimator: fixed eps must be positive");
    eps_ = fixed_eps;
  } else {
    eps_ = adaptive_eps_value(zeta_, g_norm_current(), kEpsFloor, sched_,
                              delta_bar_);
  }
}

double SetEstimator::g_norm(const Eigen::VectorXd& xi) const {
  std::vector<double> key(xi.data(), xi.data() + xi.size());
  auto it = g_norm_cache_.find(key);
  if (it != g_norm_cache_.end()) return it->second;
  const double norm = xi_impulse_norm(key, n_, m_).l1_norm;
  g_norm_cache_.emplace(std::move(key), norm);
  return norm;
}

RegressorRecord SetEstimator::build_regressor(const PlantState& state,
                                              long mu_bar) const {
  const long tp1 = state.t();  // state already holds y_{t+1}
  const long t = tp1 - 1;
  RegressorRecord rec;
  rec.phi.resize(static_cast<Eigen::Index>(n_ + m_));
  for (std::size_t i = 0; i < n_; ++i)
    rec.phi(static_cast<Eigen::Index>(i)) = -state.y(t - static_cast<long>(i));
  for (std::size_t j = 0; j < m_; ++j)
    rec.phi(static_cast<Eigen::Index>(n_ + j)) = state.u(t - static_cast<long>(j));
  const double y_next = state.y(tp1);
  rec.eta = sign_pm(y_next - rec.phi.dot(zeta_.xi_hat));
  rec.p_next = state.window_max_y(tp1 - mu_bar, t);
  rec.psi.resize(rec.phi.size() + 2);
  rec.psi.head(rec.phi.size()) = rec.eta * rec.phi;
  rec.psi(rec.phi.size()) = 1.0;
  rec.psi(rec.phi.size() + 1) = rec.p_next;
  rec.nu = rec.eta * y_next;
  return rec;
}

void SetEstimator::update(const RegressorRecord& rec) {
  Z_.add_halfspace(rec.psi, rec.nu);
  const int dim = Z_.dim();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e(dim - 2) = 1.0;  // numerator delta_w_hat
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  g(dim - 1) = -1.0;  // denominator 1 - delta_hat
  // Denominator 1 - delta_hat lies in (0, 1] over Z, so the Charnes-Cooper
  // scale s = 1/(1 - delta_hat) is at least one.
  LpSolution sol = lfp_minimize(e, 0.0, g, 1.0, Z_, 1.0);
  if (sol.status == LpStatus::infeasible)
    throw Falsified("data contradict the a-priori set: Z_t became empty");
  if (sol.status != LpStatus::optimal)
    throw Error("optimal estimation LP did not solve");
  // The minimum is attained on a face of Z (I ignores the xi coordinates);
  // re-optimize over that face with a common normalized slack variable r
  // against the recorded data inequalities. Variables (zeta, r).
  const double i_star = sol.value;
  const int nr = Z_.rows();
  Polyhedron face(dim + 1);
  for (int i = 0; i < nr; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(dim + 1);
    row.head(dim) = Z_.A().row(i).transpose();
    if (i >= apriori_rows_) row(dim) = -Z_.A().row(i).norm();
    face.add_halfspace(row, Z_.c()(i));
  }
  Eigen::VectorXd face_row = Eigen::VectorXd::Zero(dim + 1);
  face_row(dim - 2) = 1.0;
  face_row(dim - 1) = i_star;  // delta_w_hat + I* delta_hat = I*
  face.add_halfspace(face_row, i_star);
  face.add_halfspace(-face_row, -i_star);
  Eigen::VectorXd e_r = Eigen::VectorXd::Zero(dim + 1);
  e_r(dim) = 1.0;
  face.add_halfspace(e_r, 0.0);
  // Secondary objective: large data margin and small delta_hat. Putting the
  // weight on delta_w_hat rather than delta_hat keeps the implied residual
  // envelope delta_w_hat + delta_hat * p flat across window-max levels, so
  // an estimate tuned on a high-|y| stretch stays unfalsified once the
  // output settles.
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(dim + 1);
  obj(dim) = -1.0;
  obj(dim - 1) = 1.0;
  LpSolution center = lp_minimize(obj, face);
  if (center.status == LpStatus::optimal && center.point.head(dim).allFinite())
    zeta_ = EstimateVector::from_stacked(center.point.head(dim));
  else
    zeta_ = EstimateVector::from_stacked(sol.point);
  // The LP can sit a few ulps outside the bound constraints; keep the
  // criterion value exactly at the face level.
  zeta_.delta_hat = std::clamp(zeta_.delta_hat, 0.0, delta_bar_);
  zeta_.delta_w_hat = std::max(i_star * (1.0 - zeta_.delta_hat), 0.0);
  ++update_count_;
}

void SetEstimator::refresh_eps() {
  if (mode_ != EpsMode::adaptive_eps) return;
  eps_ = adaptive_eps_value(zeta_, g_norm_current(), eps_, sched_, delta_bar_);
}

namespace {

double residual_abs(const Eigen::VectorXd& xi_hat, std::size_t n, std::size_t m,
                    const PlantState& state, long k) {
  // |a_hat(q^-1) y_{k+1} - b_hat(q^-1) u_k|
  double r = state.y(k + 1);
  for (std::size_t i = 1; i <= n; ++i)
    r += xi_hat(static_cast<Eigen::Index>(i - 1)) *
         state.y(k + 1 - static_cast<long>(i));
  for (std::size_t j = 1; j <= m; ++j)
    r -= xi_hat(static_cast<Eigen::Index>(n + j - 1)) *
         state.u(k + 1 - static_cast<long>(j));
  return std::abs(r);
}

}  // namespace

bool membership_diagnostic(const Eigen::VectorXd& xi_hat, double delta_w,
                           double delta_y, double delta_u, std::size_t n,
                           std::size_t m, int mu, const PlantState& state,
                           long from, long to) {
  for (long k = from; k < to; ++k) {
    const double p_y = state.window_max_y(k + 1 - mu, k);
    const double p_u = state.window_max_u(k + 1 - mu, k);
    const double bound = delta_w + delta_y * p_y + delta_u * p_u;
    if (residual_abs(xi_hat, n, m, state, k) > bound + 1e-12 * (1.0 + bound))
      return false;
  }
  return true;
}

double max_residual(const Eigen::VectorXd& xi_hat, double delta_y,
                    double delta_u, std::size_t n, std::size_t m, int mu,
                    const PlantState& state, long from, long to) {
  double worst = 0.0;
  for (long k = from; k < to; ++k) {
    const double p_y = state.window_max_y(k + 1 - mu, k);
    const double p_u = state.window_max_u(k + 1 - mu, k);
    const double excess =
        residual_abs(xi_hat, n, m, state, k) - delta_y * p_y - delta_u * p_u;
    worst = std::max(worst, excess);
  }
  return worst;
}

FalsificationStatus falsification_check(double criterion_value, double j_star) {
  if (j_star <= 0.0) throw Error("falsification check: J_* must be positive");
  return criterion_value > j_star ? FalsificationStatus::falsified
                                  : FalsificationStatus::ok;
}

}  // namespace l1adapt
