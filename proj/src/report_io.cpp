#include "lrdfield/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace lrdfield {

namespace {

void require_keys(const json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& where) {
  if (!j.is_object()) throw config_error(where + ": expected an object");
  for (const char* k : required)
    if (!j.contains(k)) throw config_error(where + ": missing key '" + k + "'");
  for (auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw config_error(where + ": unknown key '" + key + "'");
  }
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CovarianceModel parse_model(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw config_error("model: missing 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "power_law_iso") {
    require_keys(j, {"kind", "eta"}, {"dim"}, "model");
    return CovarianceModel::power_law_iso(j.at("eta").get<double>(), j.value("dim", 1));
  }
  if (kind == "exponential") {
    require_keys(j, {"kind", "theta"}, {"dim"}, "model");
    return CovarianceModel::exponential(j.at("theta").get<double>(), j.value("dim", 1));
  }
  if (kind == "fgn_product") {
    require_keys(j, {"kind", "hurst"}, {}, "model");
    return CovarianceModel::fgn_product(j.at("hurst").get<std::vector<double>>());
  }
  if (kind == "gneiting") {
    require_keys(j, {"kind", "alpha", "gamma"}, {"dim"}, "model");
    return CovarianceModel::gneiting(j.at("alpha").get<double>(), j.at("gamma").get<double>(),
                                     j.value("dim", 2));
  }
  if (kind == "example29_3d") {
    require_keys(j, {"kind", "alpha"}, {}, "model");
    return CovarianceModel::example29_3d(j.at("alpha").get<double>());
  }
  if (kind == "separable") {
    require_keys(j, {"kind", "spatial", "temporal"}, {}, "model");
    return CovarianceModel::separable(parse_model(j.at("spatial")), parse_model(j.at("temporal")));
  }
  throw config_error("model: unknown kind '" + kind + "'");
}

Subordinator parse_subordinator(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw config_error("subordinator: missing 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity" || kind == "lognormal" || kind == "square") {
    require_keys(j, {"kind"}, {}, "subordinator");
    return Subordinator::from_name(kind, 0.0);
  }
  if (kind == "cubic" || kind == "signed_exp") {
    require_keys(j, {"kind", "beta"}, {}, "subordinator");
    return Subordinator::from_name(kind, j.at("beta").get<double>());
  }
  if (kind == "quadratic") {
    require_keys(j, {"kind", "a"}, {}, "subordinator");
    return Subordinator::quadratic(j.at("a").get<double>());
  }
  if (kind == "two_branch") {
    require_keys(j, {"kind", "c"}, {}, "subordinator");
    return Subordinator::two_branch(j.at("c").get<double>());
  }
  throw config_error("subordinator: unknown kind '" + kind + "'");
}

GridSpec parse_window(const json& j) {
  require_keys(j, {"extents"}, {"mesh"}, "window");
  auto extents = j.at("extents").get<std::vector<double>>();
  if (extents.empty() || extents.size() > 3) throw config_error("window: 1..3 extents");
  std::vector<double> mesh(extents.size(), 1.0);
  if (j.contains("mesh")) {
    mesh = j.at("mesh").get<std::vector<double>>();
    if (mesh.size() != extents.size()) throw config_error("window: mesh/extents size mismatch");
  }
  GridSpec g;
  g.dim = int(extents.size());
  for (std::size_t a = 0; a < extents.size(); ++a) {
    g.extent[a] = extents[a];
    g.mesh[a] = mesh[a];
  }
  g.validate();
  return g;
}

NormalizationMethod parse_normalization_method(const std::string& name) {
  if (name == "quadrature") return NormalizationMethod::quadrature;
  if (name == "closed_form_fgn") return NormalizationMethod::closed_form_fgn;
  if (name == "asymptotic_example27") return NormalizationMethod::asymptotic_example27;
  if (name == "lemma28") return NormalizationMethod::lemma28;
  if (name == "weighted_nonstationary") return NormalizationMethod::weighted_nonstationary;
  throw config_error("normalization: unknown method '" + name + "'");
}

ExperimentConfig parse_experiment_config(const json& j) {
  require_keys(j,
               {"model", "subordinator", "level", "windows", "replicates", "seed", "normalization",
                "rank"},
               {}, "config");
  ExperimentConfig cfg{parse_model(j.at("model")), parse_subordinator(j.at("subordinator"))};
  cfg.level = j.at("level").get<double>();
  if (!j.at("windows").is_array() || j.at("windows").empty())
    throw config_error("config: 'windows' must be a non-empty list");
  for (const auto& w : j.at("windows")) cfg.windows.push_back(parse_window(w));
  cfg.replicates = j.at("replicates").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  const json& norm = j.at("normalization");
  require_keys(norm, {"method"}, {"kappa", "lambda"}, "normalization");
  cfg.normalization = parse_normalization_method(norm.at("method").get<std::string>());
  if (cfg.normalization == NormalizationMethod::lemma28) {
    if (!norm.contains("kappa") || !norm.contains("lambda"))
      throw config_error("normalization: lemma28 needs 'kappa' and 'lambda'");
    cfg.lemma28_kappa_value = norm.at("kappa").get<double>();
    cfg.lemma28_lambda = norm.at("lambda").get<std::vector<double>>();
  }
  cfg.target_rank = j.at("rank").get<int>();
  cfg.validate();
  return cfg;
}

json model_to_json(const CovarianceModel& m) {
  json j;
  j["kind"] = m.name();
  switch (m.kind()) {
    case CovKind::power_law_iso: j["eta"] = m.params()[0]; j["dim"] = m.dim(); break;
    case CovKind::exponential: j["theta"] = m.params()[0]; j["dim"] = m.dim(); break;
    case CovKind::fgn_product: j["hurst"] = m.params(); break;
    case CovKind::gneiting: j["alpha"] = m.params()[0]; j["gamma"] = m.params()[1]; j["dim"] = m.dim(); break;
    case CovKind::example29_3d: j["alpha"] = m.params()[0]; break;
    case CovKind::separable: j["dim"] = m.dim(); break;
  }
  return j;
}

json subordinator_to_json(const Subordinator& f) {
  json j;
  j["kind"] = f.name();
  if (f.kind() == SubKind::cubic || f.kind() == SubKind::signed_exp) j["beta"] = f.param();
  if (f.kind() == SubKind::quadratic) j["a"] = f.param();
  if (f.kind() == SubKind::two_branch) j["c"] = f.param();
  return j;
}

std::string canonical_json(const json& j) {
  // nlohmann::json object keys are already sorted; dump without whitespace
  return j.dump();
}

std::string config_hash(const json& j) {
  std::string s = canonical_json(j);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json report_to_json(const ExperimentReport& rep) {
  json j;
  j["experiment"] = rep.experiment_type;
  j["gate_passed"] = rep.gate_passed;
  j["gate"] = rep.gate_description;
  if (rep.has_slope_target) {
    j["variance_slope"] = rep.variance_fit.slope;
    j["variance_slope_target"] = rep.slope_target;
    j["variance_fit_r2"] = rep.variance_fit.r_squared;
  }
  if (rep.growth_condition_warning) j["growth_condition_warning"] = true;
  if (!rep.sigma_ratio.empty()) j["sigma_ratio"] = rep.sigma_ratio;
  if (rep.ks_vs_oracle) {
    j["ks_vs_oracle"] = {{"distance", rep.ks_vs_oracle->distance},
                         {"p_value", rep.ks_vs_oracle->p_value}};
    j["oracle_skewness"] = *rep.oracle_skewness;
    j["statistic_skewness"] = *rep.statistic_skewness;
  }
  if (rep.ks_uniform_half) {
    j["ks_uniform_half"] = {{"distance", rep.ks_uniform_half->distance},
                            {"p_value", rep.ks_uniform_half->p_value}};
  }
  j["windows"] = json::array();
  for (const auto& w : rep.windows) {
    json wj;
    wj["index"] = w.window_index;
    wj["label"] = w.label;
    wj["volume"] = w.volume;
    wj["centering"] = w.centering;
    wj["scale"] = w.scale;
    wj["raw_variance"] = w.raw_variance;
    wj["mean"] = w.std_moments.mean;
    wj["variance"] = w.std_moments.variance;
    wj["skewness"] = w.std_moments.skewness;
    wj["excess_kurtosis"] = w.std_moments.excess_kurtosis;
    wj["ks_distance"] = w.ks_normal.distance;
    wj["ks_p_value"] = w.ks_normal.p_value;
    j["windows"].push_back(wj);
  }
  return j;
}

json condition_report_to_json(const ConditionReport& rep) {
  json j;
  j["condition"] = rep.condition_id;
  j["window_sizes"] = rep.window_sizes;
  j["values"] = rep.values;
  j["slope"] = rep.slope;
  j["intercept"] = rep.intercept;
  j["r_squared"] = rep.r_squared;
  j["verdict"] = verdict_name(rep.verdict);
  return j;
}

json normalization_plan_to_json(const NormalizationPlan& plan) {
  json j;
  j["method"] = plan.method_name();
  j["m"] = plan.order_m;
  j["value"] = plan.variance;
  j["centering"] = plan.centering;
  j["error_estimate"] = plan.error_estimate;
  return j;
}

std::string replicates_csv(const ExperimentReport& rep) {
  std::string out = "window_index,replicate,raw,standardized\r\n";
  for (const auto& w : rep.windows)
    for (std::size_t r = 0; r < w.raw.size(); ++r) {
      out += std::to_string(w.window_index);
      out += ',';
      out += std::to_string(r);
      out += ',';
      out += fmt17(w.raw[r]);
      out += ',';
      out += fmt17(w.standardized[r]);
      out += "\r\n";
    }
  return out;
}

std::string condition_csv(const ConditionReport& rep) {
  std::string out = "n,value\r\n";
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    out += fmt17(rep.window_sizes[i]);
    out += ',';
    out += fmt17(rep.values[i]);
    out += "\r\n";
  }
  return out;
}

namespace {
struct SvgCanvas {
  std::ostringstream os;
  double width, height;
  SvgCanvas(double w, double h) : width(w), height(h) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  void title(const std::string& t) {
    os << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"14\">" << t << "</text>\n";
  }
  std::string finish() {
    os << "</svg>\n";
    return os.str();
  }
};
}  // namespace

std::string histogram_svg(const std::vector<double>& samples, const std::string& title) {
  const double W = 640, H = 420, mL = 50, mR = 20, mT = 36, mB = 40;
  SvgCanvas svg(W, H);
  svg.title(title);
  if (samples.empty()) return svg.finish();

  double lo = *std::min_element(samples.begin(), samples.end());
  double hi = *std::max_element(samples.begin(), samples.end());
  lo = std::min(lo, -4.0);
  hi = std::max(hi, 4.0);
  const int bins = 60;
  std::vector<double> counts(bins, 0.0);
  double bw = (hi - lo) / bins;
  for (double x : samples) {
    int b = std::min(bins - 1, std::max(0, int((x - lo) / bw)));
    counts[b] += 1.0;
  }
  double density_max = 0.0;
  for (double& c : counts) {
    c /= samples.size() * bw;  // density scale
    density_max = std::max(density_max, c);
  }
  density_max = std::max(density_max, normal_pdf(0.0)) * 1.1;

  auto px = [&](double x) { return mL + (x - lo) / (hi - lo) * (W - mL - mR); };
  auto py = [&](double y) { return H - mB - y / density_max * (H - mT - mB); };

  for (int b = 0; b < bins; ++b) {
    double x0 = px(lo + b * bw), x1 = px(lo + (b + 1) * bw);
    double y = py(counts[b]);
    svg.os << "<rect x=\"" << x0 << "\" y=\"" << y << "\" width=\"" << (x1 - x0) << "\" height=\""
           << (H - mB - y) << "\" fill=\"#7aa6c2\" stroke=\"none\"/>\n";
  }
  svg.os << "<polyline fill=\"none\" stroke=\"#c23b22\" stroke-width=\"1.5\" points=\"";
  for (int i = 0; i <= 200; ++i) {
    double x = lo + (hi - lo) * i / 200.0;
    svg.os << px(x) << ',' << py(normal_pdf(x)) << ' ';
  }
  svg.os << "\"/>\n";
  svg.os << "<line x1=\"" << mL << "\" y1=\"" << (H - mB) << "\" x2=\"" << (W - mR) << "\" y2=\""
         << (H - mB) << "\" stroke=\"black\"/>\n";
  return svg.finish();
}

std::string qq_plot_svg(const std::vector<double>& samples, const std::string& title) {
  const double W = 480, H = 480, m = 50;
  SvgCanvas svg(W, H);
  svg.title(title);
  if (samples.size() < 2) return svg.finish();

  std::vector<double> sorted(samples);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const std::size_t step = std::max<std::size_t>(1, n / 400);

  double lim = 4.0;
  for (double v : {std::abs(sorted.front()), std::abs(sorted.back())}) lim = std::max(lim, v);
  auto px = [&](double x) { return m + (x + lim) / (2 * lim) * (W - 2 * m); };
  auto py = [&](double y) { return H - m - (y + lim) / (2 * lim) * (H - 2 * m); };

  svg.os << "<line x1=\"" << px(-lim) << "\" y1=\"" << py(-lim) << "\" x2=\"" << px(lim)
         << "\" y2=\"" << py(lim) << "\" stroke=\"#c23b22\"/>\n";
  for (std::size_t i = 0; i < n; i += step) {
    double p = (double(i) + 0.5) / double(n);
    double q = normal_quantile(p);
    svg.os << "<circle cx=\"" << px(q) << "\" cy=\"" << py(sorted[i])
           << "\" r=\"1.5\" fill=\"#2a4d69\"/>\n";
  }
  return svg.finish();
}

json RunManifest::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["started_utc"] = started_utc;
  j["finished_utc"] = finished_utc;
  j["outputs"] = outputs;
  return j;
}

std::string current_utc_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lrdfield
