#include "lrdfield/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <thread>

#include "lrdfield/hermite.hpp"
#include "lrdfield/quadrature.hpp"
#include "lrdfield/report_io.hpp"

namespace lrdfield {

namespace {

namespace fs = std::filesystem;

int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : int(n);
}

struct OutputOptions {
  std::string out_dir = "out";
  std::string format = "csv";  // "csv" writes report + replicate CSV, "json" report only
  bool plot = false;
};

void write_experiment_outputs(const OutputOptions& opt, const json& config_json,
                              const ExperimentReport& rep, RunManifest manifest) {
  fs::create_directories(opt.out_dir);
  auto path = [&](const std::string& name) { return (fs::path(opt.out_dir) / name).string(); };

  write_text_file(path("report.json"), report_to_json(rep).dump(2) + "\n");
  manifest.outputs.push_back("report.json");
  if (opt.format == "csv") {
    write_text_file(path("replicates.csv"), replicates_csv(rep));
    manifest.outputs.push_back("replicates.csv");
  }
  if (opt.plot && !rep.windows.empty()) {
    const auto& last = rep.windows.back();
    write_text_file(path("hist.svg"),
                    histogram_svg(last.standardized, rep.experiment_type + " statistic"));
    write_text_file(path("qq.svg"), qq_plot_svg(last.standardized, rep.experiment_type + " QQ"));
    manifest.outputs.push_back("hist.svg");
    manifest.outputs.push_back("qq.svg");
  }
  manifest.config_hash = config_hash(config_json);
  manifest.tool_version = kToolVersion;
  manifest.finished_utc = current_utc_timestamp();
  write_text_file(path("manifest.json"), manifest.to_json().dump(2) + "\n");
}

json load_config(const std::string& config_path) {
  json j;
  try {
    j = json::parse(read_text_file(config_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return j;
}

int summarize_and_exit_code(const ExperimentReport& rep) {
  const auto& last = rep.windows.back();
  std::cout << rep.experiment_type << ": windows=" << rep.windows.size()
            << " ks=" << last.ks_normal.distance;
  if (rep.has_slope_target)
    std::cout << " slope=" << rep.variance_fit.slope << " target=" << rep.slope_target;
  if (rep.ks_vs_oracle) std::cout << " ks_oracle=" << rep.ks_vs_oracle->distance;
  if (rep.ks_uniform_half) std::cout << " ks_u01/2=" << rep.ks_uniform_half->distance;
  std::cout << (rep.gate_passed ? " PASS" : " FAIL") << "\n";
  return rep.gate_passed ? 0 : 1;
}

int do_hermite(const std::string& f_name, double param, double u, double sigma, int k, bool rank) {
  Subordinator f = Subordinator::from_name(f_name, param);
  json out;
  if (rank) {
    RankResult r = hermite_rank(f, u, sigma);
    if (r.detected)
      out["rank"] = r.rank;
    else
      out["rank"] = "undetected";
  } else {
    out["a_k"] = hermite_coefficient(f, u, sigma, k);
    out["k"] = k;
  }
  std::cout << out.dump() << "\n";
  return 0;
}

int do_sigma(const std::string& config_path) {
  json j = load_config(config_path);
  if (!j.contains("model") || !j.contains("windows"))
    throw config_error("sigma config: needs 'model' and 'windows'");
  CovarianceModel model = parse_model(j.at("model"));
  int m = j.value("m", 1);
  json out = json::array();
  for (const auto& wj : j.at("windows")) {
    GridSpec g = parse_window(wj);
    std::vector<double> extents(g.dim);
    for (int a = 0; a < g.dim; ++a) extents[a] = g.nodes(a) * g.mesh[a];
    NormalizationPlan plan;
    plan.method = NormalizationMethod::quadrature;
    plan.order_m = m;
    plan.variance = sigma_stationary(model, extents, m);
    plan.error_estimate = plan.variance * 1e-6;
    out.push_back(normalization_plan_to_json(plan));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int do_check(const std::string& config_path, const OutputOptions& opt) {
  json j = load_config(config_path);
  if (!j.contains("model") || !j.contains("check"))
    throw config_error("check config: needs 'model' and 'check'");
  CovarianceModel model = parse_model(j.at("model"));
  std::string check = j.at("check").get<std::string>();

  double lo = 100.0, hi = 1e5;
  int per_decade = 8;
  if (j.contains("probes")) {
    const json& p = j.at("probes");
    lo = p.value("lo", lo);
    hi = p.value("hi", hi);
    per_decade = p.value("per_decade", per_decade);
  }
  std::vector<double> ladder = probe_ladder(lo, hi, per_decade);

  json out;
  int code = 4;
  if (check == "delta_ratio") {
    ConditionReport rep = delta_ratio(model, ladder);
    out = condition_report_to_json(rep);
    code = rep.verdict == Verdict::satisfied ? 0 : rep.verdict == Verdict::violated ? 1 : 4;
    if (opt.format == "csv") {
      fs::create_directories(opt.out_dir);
      write_text_file((fs::path(opt.out_dir) / "condition.csv").string(), condition_csv(rep));
    }
  } else if (check == "condcor2") {
    double delta = j.value("delta", 0.5);
    std::vector<std::vector<double>> ladders;
    for (double n : ladder) ladders.push_back(std::vector<double>(model.dim(), n));
    ConditionReport rep = check_condcor2(model, ladders, delta);
    out = condition_report_to_json(rep);
    code = rep.verdict == Verdict::satisfied ? 0 : rep.verdict == Verdict::violated ? 1 : 4;
  } else if (check == "spatiotemporal") {
    double delta = j.value("delta", 0.5);
    ConditionReport rep = check_spatiotemporal(model.temporal_margin(), ladder, delta);
    out = condition_report_to_json(rep);
    code = rep.verdict == Verdict::satisfied ? 0 : rep.verdict == Verdict::violated ? 1 : 4;
  } else if (check == "lrd_classify") {
    LrdClass cls = lrd_classify(model, ladder);
    out["class"] = lrd_class_name(cls);
    code = cls == LrdClass::long_range ? 0 : cls == LrdClass::short_range ? 1 : 4;
  } else {
    throw config_error("check config: unknown check '" + check + "'");
  }
  std::cout << out.dump(2) << "\n";
  return code;
}

int do_experiment(const std::string& config_path, const OutputOptions& opt,
                  std::optional<std::uint64_t> seed_override, int threads) {
  json j = load_config(config_path);
  ExperimentConfig cfg = parse_experiment_config(j);
  if (seed_override) {
    cfg.seed = *seed_override;
    j["seed"] = *seed_override;
  }
  cfg.threads = threads;

  RunManifest manifest;
  manifest.seed = cfg.seed;
  manifest.started_utc = current_utc_timestamp();

  ExperimentReport rep = run_clt_experiment(cfg);
  write_experiment_outputs(opt, j, rep, std::move(manifest));
  return summarize_and_exit_code(rep);
}

int do_fgn(const std::string& config_path, const OutputOptions& opt,
           std::optional<std::uint64_t> seed_override, int threads) {
  json j = load_config(config_path);
  if (!j.contains("hurst") || !j.contains("ladder"))
    throw config_error("fgn config: needs 'hurst' and 'ladder'");
  FgnExperimentConfig cfg;
  cfg.hurst = j.at("hurst").get<std::vector<double>>();
  if (j.contains("gamma") && !j.at("gamma").is_string())
    cfg.gamma = j.at("gamma").get<std::vector<double>>();
  cfg.ladder = j.at("ladder").get<std::vector<double>>();
  cfg.level = j.value("level", 0.0);
  cfg.replicates = j.value("replicates", 1000);
  cfg.seed = j.value("seed", std::uint64_t(1));
  if (seed_override) {
    cfg.seed = *seed_override;
    j["seed"] = *seed_override;
  }
  cfg.threads = threads;

  RunManifest manifest;
  manifest.seed = cfg.seed;
  manifest.started_utc = current_utc_timestamp();
  ExperimentReport rep = run_fgn_experiment(cfg);
  write_experiment_outputs(opt, j, rep, std::move(manifest));
  return summarize_and_exit_code(rep);
}

int do_volatility(const std::string& config_path, const OutputOptions& opt,
                  std::optional<std::uint64_t> seed_override, int threads,
                  const std::string& xi_kind, double xi_c) {
  json j = load_config(config_path);
  if (!j.contains("model") || !j.contains("windows"))
    throw config_error("volatility config: needs 'model' and 'windows'");
  VolatilityExperimentConfig cfg{parse_model(j.at("model")), VolatilityLaw::constant(1.0)};
  cfg.level = j.value("level", 1.0);
  for (const auto& w : j.at("windows")) cfg.windows.push_back(parse_window(w));
  cfg.replicates = j.value("replicates", 1000);
  cfg.seed = j.value("seed", std::uint64_t(1));
  if (seed_override) {
    cfg.seed = *seed_override;
    j["seed"] = *seed_override;
  }
  cfg.threads = threads;
  cfg.xi = (xi_kind == "constant") ? VolatilityLaw::constant(xi_c)
                                   : VolatilityLaw::levy_sqrt(cfg.level);

  RunManifest manifest;
  manifest.seed = cfg.seed;
  manifest.started_utc = current_utc_timestamp();
  ExperimentReport rep = run_random_volatility_experiment(cfg);
  write_experiment_outputs(opt, j, rep, std::move(manifest));
  return summarize_and_exit_code(rep);
}

int do_rosenblatt(const std::string& config_path, const OutputOptions& opt,
                  std::optional<std::uint64_t> seed_override, int threads, int oracle_draws,
                  int oracle_cells_per_decade) {
  json j = load_config(config_path);
  ExperimentConfig base = parse_experiment_config(j);
  if (seed_override) {
    base.seed = *seed_override;
    j["seed"] = *seed_override;
  }

  RankMExperimentConfig cfg{base.model, base.subordinator};
  cfg.level = base.level;
  cfg.windows = base.windows;
  cfg.replicates = base.replicates;
  cfg.seed = base.seed;
  cfg.target_rank = base.target_rank;
  cfg.threads = threads;
  cfg.oracle_draws = oracle_draws;
  cfg.oracle.cells_per_decade = oracle_cells_per_decade;

  RunManifest manifest;
  manifest.seed = cfg.seed;
  manifest.started_utc = current_utc_timestamp();
  ExperimentReport rep = run_rank_m_experiment(cfg);
  write_experiment_outputs(opt, j, rep, std::move(manifest));
  return summarize_and_exit_code(rep);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Excursion-set limit experiments for long-range dependent Gaussian fields"};
  app.require_subcommand(1);
  app.fallthrough();

  OutputOptions opt;
  std::optional<std::uint64_t> seed_override;
  int threads = default_threads();
  std::string config_path;

  app.add_option("--out", opt.out_dir, "output directory");
  app.add_option("--format", opt.format, "output format: csv (default) or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--plot", opt.plot, "emit SVG histogram and QQ plot");
  app.add_option("--seed", seed_override, "master seed override");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--config", config_path, "config JSON path");

  auto* hermite = app.add_subcommand("hermite", "Hermite coefficients and rank of a level indicator");
  std::string f_name = "identity";
  double f_param = 1.0, u = 0.0, sigma = 1.0;
  int k = 0;
  bool want_rank = false;
  hermite->add_option("--f", f_name, "subordinator kind");
  hermite->add_option("--param", f_param, "subordinator parameter (beta, a, or c)");
  hermite->add_option("--u", u, "level");
  hermite->add_option("--sigma", sigma, "pointwise standard deviation")->check(CLI::PositiveNumber);
  hermite->add_option("--k", k, "coefficient order")->check(CLI::NonNegativeNumber);
  hermite->add_flag("--rank", want_rank, "report the Hermite rank instead of a coefficient");

  auto* sigma_cmd = app.add_subcommand("sigma", "window-weighted covariance integrals");
  auto* check_cmd = app.add_subcommand("check", "dependence condition checks");
  auto* experiment_cmd = app.add_subcommand("experiment", "rank-1 CLT experiment");
  auto* fgn_cmd = app.add_subcommand("fgn", "anisotropic fGn scaling experiment");
  auto* volatility_cmd = app.add_subcommand("volatility", "random volatility limit experiment");
  auto* rosenblatt_cmd = app.add_subcommand("rosenblatt", "rank-m non-central limit experiment");

  std::string xi_kind = "levy";
  double xi_c = 1.0;
  volatility_cmd->add_option("--xi", xi_kind, "volatility law: levy or constant")
      ->check(CLI::IsMember({"levy", "constant"}));
  volatility_cmd->add_option("--xi-c", xi_c, "constant volatility value");

  int oracle_draws = 10000, oracle_cells = 32;
  rosenblatt_cmd->add_option("--oracle-draws", oracle_draws, "number of oracle draws");
  rosenblatt_cmd->add_option("--oracle-cells", oracle_cells, "oracle grid cells per decade");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (hermite->parsed()) return do_hermite(f_name, f_param, u, sigma, k, want_rank);
    if (sigma_cmd->parsed()) return do_sigma(config_path);
    if (check_cmd->parsed()) return do_check(config_path, opt);
    if (experiment_cmd->parsed()) return do_experiment(config_path, opt, seed_override, threads);
    if (fgn_cmd->parsed()) return do_fgn(config_path, opt, seed_override, threads);
    if (volatility_cmd->parsed())
      return do_volatility(config_path, opt, seed_override, threads, xi_kind, xi_c);
    if (rosenblatt_cmd->parsed())
      return do_rosenblatt(config_path, opt, seed_override, threads, oracle_draws, oracle_cells);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const quadrature_error& e) {
    std::cerr << "numeric failure: " << e.what() << " (estimate " << e.estimate << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace lrdfield
