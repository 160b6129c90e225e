#include "l1adapt/plant.hpp"

#include <cmath>

#include "l1adapt/errors.hpp"

namespace l1adapt {

void PlantParams::validate() const {
  if (xi.size() != n + m) throw Error("plant: xi length != n + m");
  if (m == 0) throw Error("plant: m must be >= 1");
  if (delta_w < 0.0 || delta_y < 0.0 || delta_u < 0.0)
    throw Error("plant: disturbance gains must be nonnegative");
  if (mu < 1) throw Error("plant: mu must be >= 1");
  const Polynomial b = b_poly();
  if (b.coeffs[0] == 0.0) throw NotMinimumPhase("plant: b_1 = 0");
  if (!is_minimum_phase(b)) throw NotMinimumPhase("plant: b is not minimum phase");
}

PlantState::PlantState(std::size_t n, std::vector<double> initial_y) : n_(n) {
  if (initial_y.size() > n)
    throw Error("plant: initial data longer than the model order n");
  // Pad missing leading entries with zeros so y_ holds exactly n values.
  y_.assign(n - initial_y.size(), 0.0);
  y_.insert(y_.end(), initial_y.begin(), initial_y.end());
}

double PlantState::y(long k) const {
  // y_[0] is y_{1-n}.
  const long idx = k - (1 - static_cast<long>(n_));
  if (idx < 0 || idx >= static_cast<long>(y_.size())) return 0.0;
  return y_[static_cast<std::size_t>(idx)];
}

double PlantState::u(long k) const {
  if (k < 0 || k >= static_cast<long>(u_.size())) return 0.0;
  return u_[static_cast<std::size_t>(k)];
}

void PlantState::push(double u_t, double y_next) {
  u_.push_back(u_t);
  y_.push_back(y_next);
  ++t_;
}

double PlantState::window_max_y(long from, long to) const {
  double mx = 0.0;
  for (long k = from; k <= to; ++k) mx = std::max(mx, std::abs(y(k)));
  return mx;
}

double PlantState::window_max_u(long from, long to) const {
  double mx = 0.0;
  for (long k = from; k <= to; ++k) mx = std::max(mx, std::abs(u(k)));
  return mx;
}

double window_max(const std::vector<double>& history, long first_index,
                  long from, long to) {
  double mx = 0.0;
  for (long k = from; k <= to; ++k) {
    const long idx = k - first_index;
    if (idx >= 0 && idx < static_cast<long>(history.size()))
      mx = std::max(mx, std::abs(history[static_cast<std::size_t>(idx)]));
  }
  return mx;
}

double step(PlantState& state, const PlantParams& params, double u_t,
            double v_next) {
  const long t = state.t();
  double y_next = v_next;
  for (std::size_t i = 1; i <= params.n; ++i)
    y_next -= params.xi[i - 1] * state.y(t + 1 - static_cast<long>(i));
  // b_j multiplies u_{t+1-j}; j = 1 is the input being applied now.
  y_next += params.xi[params.n] * u_t;
  for (std::size_t j = 2; j <= params.m; ++j)
    y_next += params.xi[params.n + j - 1] * state.u(t + 1 - static_cast<long>(j));
  if (!std::isfinite(y_next) || std::abs(y_next) > 1e150)
    throw NonFinite("plant output overflow (closed loop unstable)", t + 1);
  state.push(u_t, y_next);
  return y_next;
}

}  // namespace l1adapt
