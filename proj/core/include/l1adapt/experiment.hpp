#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "l1adapt/controllers.hpp"
#include "l1adapt/disturbance.hpp"
#include "l1adapt/estimator.hpp"
#include "l1adapt/plant.hpp"
#include "l1adapt/polyhedron.hpp"
#include "l1adapt/polynomial.hpp"

namespace l1adapt {

enum class ControllerKindId { optimal_known, adaptive_optimal, rls_baseline };

struct ExperimentConfig {
  PlantParams plant;
  Polyhedron xi_polytope;  // a-priori polytope over xi
  ControllerKindId controller = ControllerKindId::adaptive_optimal;
  Eigen::VectorXd xi0;     // initial estimate for adaptive/RLS controllers
  double p0_scale = 0.001;
  DisturbanceSpec disturbance;
  long horizon = 2000;
  long mu_bar = 0;
  EpsMode eps_mode = EpsMode::fixed_eps;
  double fixed_eps = 0.001;
  EpsSchedule schedule;
  double delta_bar = 0.95;
  std::optional<double> j_star;
  std::uint64_t seed = 1;
  /// y_{1-n}..y_0; when absent, drawn uniform [-1,1] from the run seed.
  std::optional<std::vector<double>> initial_y;
  /// Per-step check of |u_t| <= |G^xi| max|y| over [t+mu-mu_bar, t] with the
  /// true xi; needed for the optimality-ordering guarantee.
  bool certify_eq19 = false;
  bool halt_on_falsified = true;
  /// Fraction of the horizon treated as steady state for the summary.
  double steady_fraction = 0.25;

  void validate() const;
};

/// One row per simulated step; the row at time k holds y_k, the input
/// u_{k-1} that produced it, and v_k.
struct TraceRecord {
  long t = 0;
  double y = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;       // p_t (adaptive runs)
  int eta = 0;          // residual sign, 0 when no estimator is running
  bool update = false;
  bool cut = false;
  double eps = 0.0;
  double i_zeta = 0.0;  // I(zeta_t) after this step
};

struct ZetaLogEntry {
  long t = 0;
  double eps = 0.0;  // dead zone in force when the update fired
  Eigen::VectorXd zeta;
};

struct RunSummary {
  std::optional<double> j_theta;  // nullopt: robustly unstabilizable
  double g_norm_true = 0.0;
  double i_final = 0.0;
  double i_final_eps = 0.0;  // I(zeta_last^eps), the validated output bound
  double eps_final = 0.0;
  int update_count = 0;
  int cut_count = 0;
  long last_update_time = -1;
  double max_abs_y_steady = 0.0;
  double max_i_zeta = 0.0;
  bool falsified = false;
  bool unstable = false;
  long blowup_time = -1;
  bool eq19_certified = false;
  double runtime_seconds = 0.0;
  long horizon = 0;
  std::uint64_t seed = 0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  std::vector<ZetaLogEntry> zeta_log;
  RunSummary summary;
};

/// J(theta) = delta_w / (1 - delta_y - delta_u |G|); nullopt when the robust
/// stability condition delta_y + delta_u |G| < 1 fails.
std::optional<double> compute_J(const PlantParams& params,
                                const ImpulseNorm& norm);

/// I(zeta^eps) = (delta_w + eps) / (1 - delta - eps (2 + |G|)), the validated
/// asymptotic output bound attached to a converged estimate; +inf when the
/// denominator is not positive.
double criterion_eps(const EstimateVector& zeta, double eps, double g_norm);

/// Execute one closed-loop experiment. Falsification and instability are
/// recorded in the summary rather than thrown.
RunResult run(const ExperimentConfig& config);

/// The simulation-study preset: 7-coefficient unstable plant, gains
/// (1, 0.2, 0.02), mu = 20, mu_bar = 40, fixed eps = 0.001, horizon 2000,
/// box-plus-stability xi polytope, worst-case windows [801,810], [1201,1210].
ExperimentConfig s7_config(ControllerKindId controller,
                           DisturbanceKind base_kind, std::uint64_t seed,
                           long horizon = 2000, bool worst_case_windows = true);

RunResult replicate_s7(ControllerKindId controller, DisturbanceKind base_kind,
                       std::uint64_t seed, long horizon = 2000,
                       bool worst_case_windows = true);

/// Run one config across several seeds, one worker per run.
std::vector<RunSummary> run_batch(const ExperimentConfig& base,
                                  const std::vector<std::uint64_t>& seeds,
                                  int max_workers = 0);

/// Write trace CSV (header t,y,u,v,p,eta,update,cut,eps,I_zeta), update log
/// CSV, and summary JSON under out_dir with the given file prefix. Returns
/// the summary path.
std::string emit(const RunResult& result, const std::string& out_dir,
                 const std::string& prefix);

std::string trace_to_csv(const std::vector<TraceRecord>& trace);
std::string zeta_log_to_csv(const std::vector<ZetaLogEntry>& log);
std::string summary_to_json(const RunSummary& summary);
std::string summaries_to_json(const std::vector<RunSummary>& summaries);

ExperimentConfig load_config_json(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace l1adapt
