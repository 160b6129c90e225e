#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "l1adapt/plant.hpp"
#include "l1adapt/rng.hpp"

namespace l1adapt {

enum class DisturbanceKind {
  random_uniform,
  deterministic_trig,
  worst_case_sign,
  custom_sequence,
};

/// Closed interval of time indices (of v) on which the worst-case sign
/// disturbance is active.
struct TimeWindow {
  long start = 0;
  long end = 0;
};

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::random_uniform;
  std::uint64_t seed = 0;
  /// Base kind used outside the worst-case windows (worst_case_sign only).
  DisturbanceKind base_kind = DisturbanceKind::random_uniform;
  std::vector<TimeWindow> worst_case_windows{{801, 810}, {1201, 1210}};
  /// Values v_1, v_2, ... for custom_sequence.
  std::vector<double> custom;
};

/// Estimator context needed by the worst-case kind: the controller's current
/// coefficient estimate and the regressor at time t.
struct DisturbanceAux {
  Eigen::VectorXd xi_hat;
  Eigen::VectorXd phi;
};

/// Stateful generator for the total disturbance v. Each call produces
/// v_{t+1} from the histories up to time t plus the input u_t being applied;
/// strictly causal by construction, and every generated value satisfies the
/// envelope |v| <= delta_w + delta_y p^y + delta_u p^u.
class DisturbanceGenerator {
public:
  DisturbanceGenerator(DisturbanceSpec spec, const PlantParams& params);

  /// v_{t+1}. aux is required whenever a worst-case window is active.
  double next(const PlantState& state, double u_t,
              const std::optional<DisturbanceAux>& aux);

private:
  double base_value(DisturbanceKind kind, long t_next, double p_y, double p_u);

  DisturbanceSpec spec_;
  PlantParams params_;
  SplitMix64 rng_;
  std::size_t custom_pos_ = 0;
};

/// Read a disturbance series from a CSV file with a single column headed "v".
std::vector<double> load_custom_sequence(const std::string& path);

}  // namespace l1adapt
