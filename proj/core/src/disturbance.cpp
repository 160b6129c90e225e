#include "l1adapt/disturbance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "l1adapt/errors.hpp"

namespace l1adapt {

DisturbanceGenerator::DisturbanceGenerator(DisturbanceSpec spec,
                                           const PlantParams& params)
    : spec_(std::move(spec)), params_(params), rng_(spec_.seed) {}

double DisturbanceGenerator::base_value(DisturbanceKind kind, long t_next,
                                        double p_y, double p_u) {
  switch (kind) {
    case DisturbanceKind::random_uniform: {
      const double w = rng_.next_symmetric();
      const double d1 = rng_.next_symmetric();
      const double d2 = rng_.next_symmetric();
      return params_.delta_w * w + params_.delta_y * d1 * p_y +
             params_.delta_u * d2 * p_u;
    }
    case DisturbanceKind::deterministic_trig: {
      const double w = rng_.next_symmetric();
      const double d1 = std::cos(5.0 * static_cast<double>(t_next));
      const double d2 = std::sin(5.0 * static_cast<double>(t_next));
      return params_.delta_w * w + params_.delta_y * d1 * p_y +
             params_.delta_u * d2 * p_u;
    }
    case DisturbanceKind::custom_sequence: {
      if (custom_pos_ >= spec_.custom.size())
        throw Error("custom disturbance sequence exhausted");
      return spec_.custom[custom_pos_++];
    }
    default:
      throw Error("worst_case_sign cannot be its own base kind");
  }
}

double DisturbanceGenerator::next(const PlantState& state, double u_t,
                                  const std::optional<DisturbanceAux>& aux) {
  const long t = state.t();
  const long t_next = t + 1;
  const long mu = params_.mu;
  // p^y_{t+1} and p^u_{t+1}; the u window includes the input applied now.
  const double p_y = state.window_max_y(t_next - mu, t);
  double p_u = state.window_max_u(t_next - mu, t - 1);
  if (t >= t_next - mu) p_u = std::max(p_u, std::abs(u_t));

  if (spec_.kind != DisturbanceKind::worst_case_sign)
    return base_value(spec_.kind, t_next, p_y, p_u);

  // Keep the RNG stream aligned with the base kind so runs with and without
  // worst-case windows share the same samples.
  const double base = base_value(spec_.base_kind, t_next, p_y, p_u);
  for (const auto& w : spec_.worst_case_windows) {
    if (t_next >= w.start && t_next <= w.end) {
      if (!aux)
        throw MissingAux("worst_case_sign disturbance needs the estimate/regressor");
      const double env =
          params_.delta_w + params_.delta_y * p_y + params_.delta_u * p_u;
      return env * sign_pm(aux->xi_hat.dot(aux->phi));
    }
  }
  return base;
}

std::vector<double> load_custom_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open disturbance file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty disturbance file: " + path);
  // Tolerate a UTF-8 BOM and surrounding whitespace on the header.
  std::string header = line;
  if (header.rfind("\xEF\xBB\xBF", 0) == 0) header = header.substr(3);
  while (!header.empty() && (header.back() == '\r' || header.back() == ' '))
    header.pop_back();
  if (header != "v")
    throw Error("disturbance file must have a single column headed 'v': " + path);
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    values.push_back(std::stod(line));
  }
  return values;
}

}  // namespace l1adapt
