#pragma once

#include <cstddef>
#include <vector>

#include "l1adapt/polynomial.hpp"

namespace l1adapt {

/// Sign with the fixed convention sign(0) = +1, used consistently by the
/// worst-case disturbance and the estimator residual.
inline double sign_pm(double x) { return x < 0.0 ? -1.0 : 1.0; }

/// Ground-truth plant: stacked coefficients xi = (a_1..a_n, b_1..b_m),
/// disturbance norm delta_w, perturbation gains delta_y/delta_u, and the
/// perturbation memory mu.
struct PlantParams {
  std::vector<double> xi;
  std::size_t n = 0;
  std::size_t m = 0;
  double delta_w = 0.0;
  double delta_y = 0.0;
  double delta_u = 0.0;
  int mu = 1;

  Polynomial a_poly() const { return split_xi(xi, n, m).first; }
  Polynomial b_poly() const { return split_xi(xi, n, m).second; }

  /// Checks b_1 != 0, minimum phase, nonnegative gains, mu >= 1.
  void validate() const;
};

/// Full input/output history of one simulation. Histories are zero for
/// indices before the stored initial data; y_{1-n}..y_0 come from the
/// initial-data vector.
class PlantState {
public:
  /// initial_y lists (y_{1-n}, ..., y_0) in ascending time order.
  PlantState(std::size_t n, std::vector<double> initial_y);

  long t() const { return t_; }

  /// y_k, defined for all k <= t() (zero before the stored data).
  double y(long k) const;
  /// u_k, defined for all k < t()+1 once pushed (zero for k < 0).
  double u(long k) const;

  /// Record u_t and the measured y_{t+1}; advances time by one step.
  void push(double u_t, double y_next);

  /// max |y_k| over k in [from, to], indices outside the history count as 0.
  double window_max_y(long from, long to) const;
  double window_max_u(long from, long to) const;

private:
  std::size_t n_;
  long t_ = 0;
  std::vector<double> y_;  // y_{1-n}, ..., y_t
  std::vector<double> u_;  // u_0, ..., u_{t-1}
};

/// max |x_k| over the window [from, to] of a zero-based history starting at
/// time `first_index`; indices outside the stored range contribute 0.
double window_max(const std::vector<double>& history, long first_index,
                  long from, long to);

/// One plant step: y_{t+1} = -sum a_i y_{t+1-i} + sum b_j u_{t+1-j} + v_{t+1}.
/// Appends (u_t, y_{t+1}) to the state. Throws NonFinite if the output
/// overflows (closed-loop instability).
double step(PlantState& state, const PlantParams& params, double u_t,
            double v_next);

}  // namespace l1adapt
