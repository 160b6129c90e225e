#include "l1adapt/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "l1adapt/errors.hpp"
#include "l1adapt/rng.hpp"

namespace l1adapt {

namespace {

using nlohmann::json;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void ExperimentConfig::validate() const {
  plant.validate();
  if (horizon < 1) throw Error("config: horizon must be >= 1");
  if (mu_bar < 2L * plant.mu) throw Error("config: mu_bar must be >= 2 mu");
  if (eps_mode == EpsMode::fixed_eps && fixed_eps <= 0.0)
    throw Error("config: fixed eps must be positive");
  if (xi_polytope.dim() != static_cast<int>(plant.n + plant.m))
    throw Error("config: xi polytope dimension != n + m");
  if (controller != ControllerKindId::optimal_known &&
      xi0.size() != static_cast<Eigen::Index>(plant.n + plant.m))
    throw Error("config: xi0 dimension != n + m");
  if (initial_y && initial_y->size() > plant.n)
    throw Error("config: initial data longer than n");
  if (steady_fraction <= 0.0 || steady_fraction > 1.0)
    throw Error("config: steady_fraction must be in (0, 1]");
}

std::optional<double> compute_J(const PlantParams& params,
                                const ImpulseNorm& norm) {
  const double denom = 1.0 - params.delta_y - params.delta_u * norm.l1_norm;
  if (denom <= 0.0) return std::nullopt;
  return params.delta_w / denom;
}

double criterion_eps(const EstimateVector& zeta, double eps, double g_norm) {
  const double denom = 1.0 - zeta.delta_hat - eps * (2.0 + g_norm);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return (zeta.delta_w_hat + eps) / denom;
}

RunResult run(const ExperimentConfig& config) {
  config.validate();
  const auto t_start = std::chrono::steady_clock::now();

  const std::size_t n = config.plant.n;
  const std::size_t m = config.plant.m;

  SplitMix64 master(config.seed);
  SplitMix64 init_rng = master.split();
  const std::uint64_t derived_dist_seed = master.next_u64();

  std::vector<double> initial;
  if (config.initial_y) {
    initial = *config.initial_y;
  } else {
    initial.resize(n);
    for (auto& v : initial) v = init_rng.next_symmetric();
  }
  PlantState state(n, initial);

  DisturbanceSpec dspec = config.disturbance;
  if (dspec.seed == 0) dspec.seed = derived_dist_seed;
  DisturbanceGenerator dist(dspec, config.plant);

  const ImpulseNorm g_true = xi_impulse_norm(config.plant.xi, n, m);
  const Eigen::VectorXd xi_true = to_eigen(config.plant.xi);

  std::optional<SetEstimator> est;
  std::optional<RlsState> rls;
  if (config.controller == ControllerKindId::adaptive_optimal) {
    est.emplace(config.xi_polytope, n, m, config.delta_bar, config.xi0,
                config.eps_mode, config.fixed_eps, config.schedule);
  } else if (config.controller == ControllerKindId::rls_baseline) {
    rls = RlsState::initial(config.xi0, config.p0_scale);
  }

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(config.horizon));
  RunSummary& sum = result.summary;
  sum.horizon = config.horizon;
  sum.seed = config.seed;
  sum.g_norm_true = g_true.l1_norm;
  sum.j_theta = compute_J(config.plant, g_true);
  sum.eq19_certified = config.certify_eq19;

  for (long t = 0; t < config.horizon; ++t) {
    TraceRecord rec;
    rec.t = t + 1;

    // Step 1: control input.
    switch (config.controller) {
      case ControllerKindId::optimal_known:
        rec.u = control_optimal(xi_true, n, m, state);
        break;
      case ControllerKindId::adaptive_optimal: {
        const AdaptiveControl ac =
            control_adaptive(*est, state, config.plant.mu, config.mu_bar);
        rec.u = ac.u;
        rec.cut = ac.cut;
        if (ac.cut) ++sum.cut_count;
        break;
      }
      case ControllerKindId::rls_baseline:
        rec.u = control_optimal(rls->xi_hat, n, m, state);
        break;
    }

    // Regressor phi_t (includes u_t) for the disturbance and for RLS.
    Eigen::VectorXd phi(static_cast<Eigen::Index>(n + m));
    for (std::size_t i = 0; i < n; ++i)
      phi(static_cast<Eigen::Index>(i)) = -state.y(t - static_cast<long>(i));
    phi(static_cast<Eigen::Index>(n)) = rec.u;
    for (std::size_t j = 1; j < m; ++j)
      phi(static_cast<Eigen::Index>(n + j)) = state.u(t - static_cast<long>(j));

    std::optional<DisturbanceAux> aux;
    switch (config.controller) {
      case ControllerKindId::optimal_known:
        aux = DisturbanceAux{xi_true, phi};
        break;
      case ControllerKindId::adaptive_optimal:
        aux = DisturbanceAux{est->zeta().xi_hat, phi};
        break;
      case ControllerKindId::rls_baseline:
        aux = DisturbanceAux{rls->xi_hat, phi};
        break;
    }
    rec.v = dist.next(state, rec.u, aux);

    // Eq-19-style certification against the true plant, before stepping.
    if (config.certify_eq19 && sum.eq19_certified) {
      const double bound =
          g_true.l1_norm *
          state.window_max_y(t + config.plant.mu - config.mu_bar, t);
      if (std::abs(rec.u) > bound * (1.0 + 1e-12) + 1e-12)
        sum.eq19_certified = false;
    }

    // Step 2: plant output.
    try {
      rec.y = step(state, config.plant, rec.u, rec.v);
    } catch (const NonFinite& nf) {
      sum.unstable = true;
      sum.blowup_time = nf.time;
      break;
    }

    // Step 3: estimation.
    bool falsified_now = false;
    if (est) {
      const RegressorRecord reg = est->build_regressor(state, config.mu_bar);
      rec.eta = reg.eta < 0 ? -1 : 1;
      rec.p = reg.p_next;
      if (est->dead_zone_violated(reg)) {
        const double eps_in_force = est->eps();
        try {
          est->update(reg);
          rec.update = true;
          sum.last_update_time = t + 1;
          result.zeta_log.push_back(
              {t + 1, eps_in_force, est->zeta().stacked()});
        } catch (const Falsified&) {
          falsified_now = true;
        }
      }
      est->refresh_eps();
      rec.eps = est->eps();
      rec.i_zeta = est->zeta().criterion();
      sum.max_i_zeta = std::max(sum.max_i_zeta, rec.i_zeta);
      if (config.j_star &&
          falsification_check(rec.i_zeta, *config.j_star) ==
              FalsificationStatus::falsified)
        falsified_now = true;
    } else if (rls) {
      *rls = rls_step(*rls, phi, rec.y, config.xi_polytope);
    }

    result.trace.push_back(rec);
    if (falsified_now) {
      sum.falsified = true;
      if (config.halt_on_falsified) break;
    }
  }

  if (est) {
    sum.i_final = est->zeta().criterion();
    sum.eps_final = est->eps();
    sum.i_final_eps =
        criterion_eps(est->zeta(), est->eps(), est->g_norm_current());
    sum.update_count = est->update_count();
  }

  const long steady_from =
      config.horizon -
      static_cast<long>(std::ceil(config.steady_fraction *
                                  static_cast<double>(config.horizon)));
  for (const auto& rec : result.trace)
    if (rec.t > steady_from)
      sum.max_abs_y_steady = std::max(sum.max_abs_y_steady, std::abs(rec.y));

  sum.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

ExperimentConfig s7_config(ControllerKindId controller,
                           DisturbanceKind base_kind, std::uint64_t seed,
                           long horizon, bool worst_case_windows) {
  ExperimentConfig cfg;
  cfg.plant.n = 4;
  cfg.plant.m = 3;
  cfg.plant.xi = {-4.2222, 6.9290, -5.2469, 1.5432, 2.0000, -3.3333, 1.3889};
  cfg.plant.delta_w = 1.0;
  cfg.plant.delta_y = 0.2;
  cfg.plant.delta_u = 0.02;
  cfg.plant.mu = 20;
  cfg.mu_bar = 40;
  cfg.horizon = horizon;
  cfg.seed = seed;
  cfg.controller = controller;
  cfg.eps_mode = EpsMode::fixed_eps;
  cfg.fixed_eps = 0.001;
  cfg.delta_bar = 0.95;

  const int dim = 7;
  Polyhedron xi_poly(dim);
  auto unit = [dim](int i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e(i) = 1.0;
    return e;
  };
  for (int i = 0; i < 4; ++i) {  // |a_i| <= 20
    xi_poly.add_halfspace(unit(i), -20.0);
    xi_poly.add_halfspace(-unit(i), -20.0);
  }
  for (int j = 4; j < 7; ++j) {  // |b_j| <= 10
    xi_poly.add_halfspace(unit(j), -10.0);
    xi_poly.add_halfspace(-unit(j), -10.0);
  }
  xi_poly.add_halfspace(unit(4), 0.1);               // b_1 >= 0.1
  xi_poly.add_halfspace(unit(4) - unit(6), 0.01);    // b_1 - b_3 >= 0.01
  xi_poly.add_halfspace(unit(4) - unit(5) + unit(6), 0.01);
  xi_poly.add_halfspace(unit(4) + unit(5) + unit(6), 0.01);
  cfg.xi_polytope = std::move(xi_poly);

  Eigen::VectorXd xi0 = Eigen::VectorXd::Zero(dim);
  xi0(4) = 1.0;
  cfg.xi0 = std::move(xi0);

  cfg.disturbance.kind = worst_case_windows ? DisturbanceKind::worst_case_sign
                                            : base_kind;
  cfg.disturbance.base_kind = base_kind;
  cfg.disturbance.worst_case_windows = {{801, 810}, {1201, 1210}};
  cfg.disturbance.seed = 0;  // derived from the run seed
  cfg.certify_eq19 = true;
  return cfg;
}

RunResult replicate_s7(ControllerKindId controller, DisturbanceKind base_kind,
                       std::uint64_t seed, long horizon,
                       bool worst_case_windows) {
  return run(s7_config(controller, base_kind, seed, horizon, worst_case_windows));
}

std::vector<RunSummary> run_batch(const ExperimentConfig& base,
                                  const std::vector<std::uint64_t>& seeds,
                                  int max_workers) {
  if (max_workers <= 0)
    max_workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<RunSummary> out(seeds.size());
  std::size_t next = 0;
  while (next < seeds.size()) {
    const std::size_t batch =
        std::min<std::size_t>(static_cast<std::size_t>(max_workers),
                              seeds.size() - next);
    std::vector<std::future<RunSummary>> futs;
    futs.reserve(batch);
    for (std::size_t k = 0; k < batch; ++k) {
      ExperimentConfig cfg = base;
      cfg.seed = seeds[next + k];
      futs.push_back(std::async(std::launch::async, [cfg]() {
        return run(cfg).summary;
      }));
    }
    for (std::size_t k = 0; k < batch; ++k) out[next + k] = futs[k].get();
    next += batch;
  }
  return out;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream os;
  os << "t,y,u,v,p,eta,update,cut,eps,I_zeta\n";
  for (const auto& r : trace) {
    os << r.t << ',' << fmt(r.y) << ',' << fmt(r.u) << ',' << fmt(r.v) << ','
       << fmt(r.p) << ',' << r.eta << ',' << (r.update ? 1 : 0) << ','
       << (r.cut ? 1 : 0) << ',' << fmt(r.eps) << ',' << fmt(r.i_zeta) << '\n';
  }
  return os.str();
}

std::string zeta_log_to_csv(const std::vector<ZetaLogEntry>& log) {
  std::ostringstream os;
  os << "t,eps";
  const Eigen::Index dim = log.empty() ? 0 : log.front().zeta.size();
  for (Eigen::Index i = 0; i < dim; ++i) os << ",zeta_" << i;
  os << '\n';
  for (const auto& e : log) {
    os << e.t << ',' << fmt(e.eps);
    for (Eigen::Index i = 0; i < e.zeta.size(); ++i) os << ',' << fmt(e.zeta(i));
    os << '\n';
  }
  return os.str();
}

namespace {

json summary_json(const RunSummary& s) {
  json j;
  if (s.j_theta)
    j["J_theta"] = *s.j_theta;
  else
    j["J_theta"] = nullptr;
  j["robustly_stabilizable"] = s.j_theta.has_value();
  j["g_norm_true"] = s.g_norm_true;
  j["I_final"] = s.i_final;
  j["I_final_eps"] = std::isfinite(s.i_final_eps) ? json(s.i_final_eps)
                                                  : json(nullptr);
  j["eps_final"] = s.eps_final;
  j["update_count"] = s.update_count;
  j["cut_count"] = s.cut_count;
  j["last_update_time"] = s.last_update_time;
  j["max_abs_y_steady"] = s.max_abs_y_steady;
  j["max_I_zeta"] = s.max_i_zeta;
  j["falsified"] = s.falsified;
  j["unstable"] = s.unstable;
  j["blowup_time"] = s.blowup_time;
  j["eq19_certified"] = s.eq19_certified;
  j["runtime_seconds"] = s.runtime_seconds;
  j["horizon"] = s.horizon;
  j["seed"] = s.seed;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace

std::string summary_to_json(const RunSummary& summary) {
  return summary_json(summary).dump(2) + "\n";
}

std::string summaries_to_json(const std::vector<RunSummary>& summaries) {
  json arr = json::array();
  for (const auto& s : summaries) arr.push_back(summary_json(s));
  return arr.dump(2) + "\n";
}

std::string emit(const RunResult& result, const std::string& out_dir,
                 const std::string& prefix) {
  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/" + prefix;
  write_file(base + "_trace.csv", trace_to_csv(result.trace));
  write_file(base + "_zeta.csv", zeta_log_to_csv(result.zeta_log));
  const std::string summary_path = base + "_summary.json";
  write_file(summary_path, summary_to_json(result.summary));
  return summary_path;
}

namespace {

DisturbanceKind parse_kind(const std::string& s) {
  if (s == "random_uniform" || s == "random") return DisturbanceKind::random_uniform;
  if (s == "deterministic_trig" || s == "trig")
    return DisturbanceKind::deterministic_trig;
  if (s == "worst_case_sign") return DisturbanceKind::worst_case_sign;
  if (s == "custom_sequence") return DisturbanceKind::custom_sequence;
  throw Error("unknown disturbance kind: " + s);
}

ControllerKindId parse_controller(const std::string& s) {
  if (s == "optimal_known") return ControllerKindId::optimal_known;
  if (s == "adaptive_optimal" || s == "adaptive")
    return ControllerKindId::adaptive_optimal;
  if (s == "rls_baseline" || s == "rls") return ControllerKindId::rls_baseline;
  throw Error("unknown controller kind: " + s);
}

}  // namespace

ExperimentConfig load_config_json(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentConfig cfg;

  const json& p = j.at("plant");
  cfg.plant.n = p.at("n").get<std::size_t>();
  cfg.plant.m = p.at("m").get<std::size_t>();
  cfg.plant.xi = p.at("xi").get<std::vector<double>>();
  cfg.plant.delta_w = p.at("delta_w").get<double>();
  cfg.plant.delta_y = p.at("delta_y").get<double>();
  cfg.plant.delta_u = p.at("delta_u").get<double>();
  cfg.plant.mu = p.at("mu").get<int>();

  const json& xp = j.at("xi_polytope");
  const auto rows = xp.at("A").get<std::vector<std::vector<double>>>();
  const auto rhs = xp.at("c").get<std::vector<double>>();
  if (rows.size() != rhs.size()) throw Error("config: polytope A/c size mismatch");
  Polyhedron poly(static_cast<int>(cfg.plant.n + cfg.plant.m));
  for (std::size_t i = 0; i < rows.size(); ++i)
    poly.add_halfspace(to_eigen(rows[i]), rhs[i]);
  cfg.xi_polytope = std::move(poly);

  cfg.controller = parse_controller(j.at("controller").get<std::string>());
  if (j.contains("xi0")) cfg.xi0 = to_eigen(j.at("xi0").get<std::vector<double>>());
  cfg.p0_scale = j.value("p0_scale", 0.001);

  if (j.contains("disturbance")) {
    const json& d = j.at("disturbance");
    cfg.disturbance.kind = parse_kind(d.value("kind", "random_uniform"));
    cfg.disturbance.base_kind = parse_kind(d.value("base_kind", "random_uniform"));
    cfg.disturbance.seed = d.value("seed", std::uint64_t{0});
    if (d.contains("worst_case_windows")) {
      cfg.disturbance.worst_case_windows.clear();
      for (const auto& w : d.at("worst_case_windows"))
        cfg.disturbance.worst_case_windows.push_back(
            {w.at(0).get<long>(), w.at(1).get<long>()});
    }
    if (d.contains("file"))
      cfg.disturbance.custom = load_custom_sequence(d.at("file").get<std::string>());
    else if (d.contains("custom"))
      cfg.disturbance.custom = d.at("custom").get<std::vector<double>>();
  }

  cfg.horizon = j.value("horizon", 2000L);
  cfg.mu_bar = j.value("mu_bar", 2L * cfg.plant.mu);
  if (j.contains("eps")) {
    const json& e = j.at("eps");
    const std::string mode = e.value("mode", "fixed");
    if (mode == "fixed") {
      cfg.eps_mode = EpsMode::fixed_eps;
      cfg.fixed_eps = e.at("value").get<double>();
    } else if (mode == "adaptive") {
      cfg.eps_mode = EpsMode::adaptive_eps;
      cfg.schedule.E = e.value("E", 0.1);
      cfg.schedule.kappa = e.value("kappa", 1.1);
      cfg.schedule.varkappa = e.value("varkappa", 0.97);
    } else {
      throw Error("config: eps mode must be 'fixed' or 'adaptive'");
    }
  }
  cfg.delta_bar = j.value("delta_bar", 0.95);
  if (j.contains("j_star") && !j.at("j_star").is_null())
    cfg.j_star = j.at("j_star").get<double>();
  cfg.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("initial_y"))
    cfg.initial_y = j.at("initial_y").get<std::vector<double>>();
  cfg.certify_eq19 = j.value("certify_eq19", false);
  cfg.halt_on_falsified = j.value("halt_on_falsified", true);
  cfg.steady_fraction = j.value("steady_fraction", 0.25);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_config_json(ss.str());
}

}  // namespace l1adapt
