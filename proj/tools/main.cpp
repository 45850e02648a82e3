// bolax command line: batch experiments over the torus Benjamin-Ono spectral
// laboratory, with CSV/JSON outputs and reproducible manifests.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bolax/acceptance.hpp"
#include "bolax/burgers.hpp"
#include "bolax/csv.hpp"
#include "bolax/errors.hpp"
#include "bolax/evans.hpp"
#include "bolax/evolve.hpp"
#include "bolax/landscape.hpp"
#include "bolax/laxspec.hpp"
#include "bolax/parallel.hpp"
#include "bolax/potential.hpp"
#include "bolax/quantize.hpp"
#include "bolax/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bolax;

namespace {

const std::set<std::string> kKnownKeys = {
    "potential", "epsilon", "M", "delta", "times", "kmax", "lambda", "lambda_min",
    "lambda_max", "grid_points", "n_r", "n_theta", "dt", "x_points", "eta_points",
    "method", "t1", "t2"};

struct RunConfig {
  json raw;

  void validate() const {
    for (auto it = raw.begin(); it != raw.end(); ++it)
      if (!kKnownKeys.count(it.key())) throw ConfigInvalid("unknown config key '" + it.key() + "'");
  }

  TrigPotential potential() const {
    if (!raw.contains("potential")) return preset_potential("cosine");
    const json& p = raw.at("potential");
    if (p.is_string()) return preset_potential(p.get<std::string>());
    if (p.is_array()) {
      std::vector<Complex> c;
      for (const auto& e : p) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
      return parse_potential(c);
    }
    throw ConfigInvalid("potential must be a preset name or [[re,im],...]");
  }

  std::vector<double> epsilons(double dflt) const {
    if (!raw.contains("epsilon")) return {dflt};
    const json& e = raw.at("epsilon");
    if (e.is_number()) return {e.get<double>()};
    if (e.is_array()) {
      std::vector<double> v;
      for (const auto& x : e) v.push_back(x.get<double>());
      if (v.empty()) throw ConfigInvalid("epsilon ladder is empty");
      return v;
    }
    throw ConfigInvalid("epsilon must be a number or an array");
  }

  int truncation(const TrigPotential& u, double eps, double lambda_target) const {
    if (!raw.contains("M") || (raw.at("M").is_string() && raw.at("M") == "auto"))
      return auto_truncation(u, eps, lambda_target);
    if (raw.at("M").is_number_integer()) return raw.at("M").get<int>();
    throw ConfigInvalid("M must be \"auto\" or an integer");
  }

  double number(const std::string& key, double dflt) const {
    if (!raw.contains(key)) return dflt;
    if (!raw.at(key).is_number()) throw ConfigInvalid(key + " must be a number");
    return raw.at(key).get<double>();
  }

  int integer(const std::string& key, int dflt) const {
    if (!raw.contains(key)) return dflt;
    if (!raw.at(key).is_number_integer()) throw ConfigInvalid(key + " must be an integer");
    return raw.at(key).get<int>();
  }

  std::vector<double> times() const {
    std::vector<double> v;
    if (!raw.contains("times")) return {0.15, 0.5};
    for (const auto& x : raw.at("times")) v.push_back(x.get<double>());
    return v;
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ComputeError("cannot write " + path.string());
  f << content;
}

json manifest_base(const std::string& command, const RunConfig& cfg) {
  json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["config"] = cfg.raw;
  return m;
}

void cmd_spectrum(const RunConfig& cfg, const fs::path& out, json& manifest) {
  TrigPotential u = cfg.potential();
  const double eps = cfg.epsilons(0.5)[0];
  const int M = cfg.truncation(u, eps, 2.0 * sup_norm(u));
  manifest["resolved_M"] = M;
  SpectrumResult spec = eigensolve(assemble_lax(u, eps, M));
  VecXd theta = phase_constants(spec);
  VecXcd s = raw_pairings(spec);
  CsvWriter csv({"n", "lambda", "gap", "theta", "re_pairing", "im_pairing", "abs_inner_1"});
  for (int n = 0; n < M; ++n)
    csv.row({std::to_string(n), fmt_double(spec.lambdas(n)),
             fmt_double(n + 1 < M ? spec.gaps(n) : 0.0), fmt_double(theta(n)),
             fmt_double(s(n).real()), fmt_double(s(n).imag()),
             fmt_double(std::abs(spec.vectors(0, n)))});
  csv.save((out / "spectrum.csv").string());
  SumRuleResult sr = gaps_and_sumrule(spec, u);
  manifest["sum_rule_residual"] = sr.residual;
}

void cmd_quantize(const RunConfig& cfg, const fs::path& out, json& manifest) {
  TrigPotential u = cfg.potential();
  std::vector<double> ladder = cfg.epsilons(0.0);
  if (ladder.size() == 1) ladder = {0.2, 0.1, 0.05, 0.025};
  const double delta = cfg.number("delta", 0.2);
  QuantizationReport rep = residual_report(u, ladder, delta);
  write_file(out / "quantize_summary.json", quantization_report_to_json(rep));

  CsvWriter csv({"eps", "n", "lambda_hat", "lambda_eig", "residual_pair", "region"});
  SpacingDiagnostics sd = spacing_report(u, critical_points(u, 0.0), delta);
  for (size_t li = 0; li < ladder.size(); ++li) {
    const double eps = ladder[li];
    const int M = auto_truncation(u, eps, -find_extrema(u).min_u + delta + 2.0 * sup_norm(u));
    SpectrumResult spec = eigensolve(assemble_lax(u, eps, M));
    RegionPartition part = region_classify(spec, u, delta, sd.bands);
    size_t pair_idx = 0;
    const auto& residuals = rep.small_pair_residuals[li];
    for (int n = 0; n < spec.lambdas.size(); ++n) {
      if (spec.lambdas(n) > -find_extrema(u).min_u + delta + sup_norm(u)) break;
      std::string hat;
      if (part.tags[n] == Region::small) {
        try {
          hat = fmt_double(predict_small(u, eps, delta, n));
        } catch (const OutOfRegion&) {
        }
      }
      std::string rp;
      if (part.tags[n] == Region::small && n + 1 < spec.lambdas.size() &&
          part.tags[n + 1] == Region::small && pair_idx < residuals.size())
        rp = fmt_double(residuals[pair_idx++]);
      csv.row({fmt_double(eps), std::to_string(n), hat, fmt_double(spec.lambdas(n)), rp,
               region_name(part.tags[n])});
    }
  }
  csv.save((out / "quantize.csv").string());
  manifest["small_slope"] = rep.small_slope;
}

void cmd_evans(const RunConfig& cfg, const fs::path& out, json& manifest) {
  TrigPotential u = cfg.potential();
  const double eps = cfg.epsilons(0.5)[0];
  const double lo = cfg.number("lambda_min", -1.8);
  const double hi = cfg.number("lambda_max", 1.8);
  const int pts = cfg.integer("grid_points",
                              static_cast<int>(std::lround((hi - lo) / (eps / 50.0))) + 1);
  EvansScan scan = scan_zeros(u, eps, lo, hi, pts);
  CsvWriter csv({"lambda", "abs_det", "err_est", "matched_eigenvalue"});
  for (size_t i = 0; i < scan.lambdas.size(); ++i)
    csv.row({fmt_double(scan.lambdas[i]), fmt_double(scan.abs_det[i]),
             fmt_double(scan.err_est[i]), ""});
  for (size_t z = 0; z < scan.zeros.size(); ++z)
    csv.row({fmt_double(scan.zeros[z]), "0", "0",
             std::isnan(scan.matched_eigenvalue[z]) ? ""
                                                    : fmt_double(scan.matched_eigenvalue[z])});
  csv.save((out / "evans.csv").string());
  manifest["zeros_found"] = scan.zeros.size();
  manifest["median_abs_det"] = scan.median_abs_det;
}

void cmd_landscape(const RunConfig& cfg, const fs::path& out, json& manifest) {
  TrigPotential u = cfg.potential();
  const double lambda = cfg.number("lambda", 0.0);
  LevelGridSpec spec;
  spec.n_r = cfg.integer("n_r", 240);
  spec.n_theta = cfg.integer("n_theta", 480);
  LevelGrid grid = level_grid(u, lambda, spec);
  CsvWriter csv({"r", "theta", "re_S_clamped"});
  for (int i = 0; i < spec.n_r; ++i)
    for (int j = 0; j < spec.n_theta; ++j)
      csv.row({fmt_double(grid.radii[i]), fmt_double(grid.thetas[j]),
               fmt_double(grid.values(i, j))});
  csv.save((out / "level_grid.csv").string());

  LevelGridSpec tree_spec;  // denser default for the combinatorics
  MergeTree tree = merge_tree(u, lambda, tree_spec);
  PruneResult pruning = prune_tree(tree);
  write_file(out / "merge_tree.json", merge_tree_to_json(tree, pruning));
  manifest["leaves"] = tree.N;
  manifest["case"] = tree.small_case ? "small" : "large";
}

void cmd_burgers(const RunConfig& cfg, const fs::path& out, json& manifest) {
  TrigPotential u = cfg.potential();
  DistributionProfile prof(u);
  const int eta_points = cfg.integer("eta_points", 200);
  CsvWriter profile({"eta", "F", "x_plus", "x_minus", "A"});
  for (int i = 1; i < eta_points; ++i) {
    const double eta = prof.min_u() + (prof.max_u() - prof.min_u()) * i / eta_points;
    double xp, xm;
    prof.antecedents(eta, xp, xm);
    profile.row({fmt_double(eta), fmt_double(prof.F(eta)), fmt_double(xp), fmt_double(xm),
                 fmt_double(prof.action_A(eta))});
  }
  profile.save((out / "profile.csv").string());

  const int x_points = cfg.integer("x_points", 512);
  CsvWriter field({"t", "x", "count", "alt_sum"});
  for (double t : cfg.times()) {
    std::vector<double> xs(x_points);
    for (int i = 0; i < x_points; ++i) xs[i] = kTwoPi * i / x_points + 1e-7;
    std::vector<double> vals = alt_sum_field(u, t, xs);
    for (int i = 0; i < x_points; ++i) {
      int count = 0;
      try {
        count = static_cast<int>(branches(u, t, xs[i]).values.size());
      } catch (const BranchCountEven&) {
        count = static_cast<int>(branches(u, t, xs[i] + 1e-7).values.size());
      }
      field.row({fmt_double(t), fmt_double(xs[i]), std::to_string(count), fmt_double(vals[i])});
    }
  }
  field.save((out / "field.csv").string());
  manifest["min_u"] = prof.min_u();
  manifest["max_u"] = prof.max_u();
}

void cmd_weaklimit(const RunConfig& cfg, const fs::path& out, json& manifest) {
  TrigPotential u = cfg.potential();
  DistributionProfile prof(u);
  const int kmax = cfg.integer("kmax", 8);
  CsvWriter csv({"t", "k", "re", "im"});
  for (double t : cfg.times())
    for (int k = 1; k <= kmax; ++k) {
      Complex v = weak_limit_fourier(prof, t, k);
      csv.row({fmt_double(t), std::to_string(k), fmt_double(v.real()), fmt_double(v.imag())});
    }
  csv.save((out / "weaklimit.csv").string());
  manifest["kmax"] = kmax;
}

void cmd_evolve(const RunConfig& cfg, const fs::path& out, json& manifest) {
  TrigPotential u = cfg.potential();
  const int kmax = cfg.integer("kmax", 8);
  const double dt = cfg.number("dt", 1e-4);
  const std::string method =
      cfg.raw.contains("method") ? cfg.raw.at("method").get<std::string>() : "explicit";
  if (method != "explicit" && method != "reference" && method != "both" && method != "limit")
    throw ConfigInvalid("method must be explicit, reference, limit or both");

  CsvWriter csv({"eps", "t", "k", "re", "im", "method"});
  json summary = json::array();
  for (double eps : cfg.epsilons(0.5)) {
    for (double t : cfg.times()) {
      std::vector<EvolutionState> states;
      if (method == "explicit" || method == "both") {
        const int M = cfg.truncation(u, eps, 6.0 * sup_norm(u));
        states.push_back(fourier_evolution(u, eps, t, kmax, M));
      }
      if (method == "reference" || method == "both")
        states.push_back(reference_integrator(u, eps, t, dt, 128, kmax));
      if (method == "limit")
        states.push_back(weak_limit_operator(u, t, kmax, cfg.integer("M", 512)));
      for (const auto& st : states) {
        for (int k = 0; k <= kmax; ++k)
          csv.row({fmt_double(st.eps), fmt_double(t), std::to_string(k),
                   fmt_double(st.coeffs(k).real()), fmt_double(st.coeffs(k).imag()),
                   st.provenance});
        json e;
        e["eps"] = st.eps;
        e["t"] = t;
        e["method"] = st.provenance;
        e["M"] = st.M;
        e["error_estimate"] = st.error_estimate;
        summary.push_back(e);
      }
    }
  }
  csv.save((out / "evolve.csv").string());
  write_file(out / "evolve_summary.json", summary.dump(2));
  manifest["kmax"] = kmax;
}

void cmd_report(const RunConfig&, const fs::path& out, json& manifest) {
  std::vector<CriterionResult> results = run_acceptance();
  write_file(out / "acceptance.json", acceptance_to_json(results));
  int passed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name << " -- "
              << r.details << "\n";
    passed += r.pass;
  }
  manifest["criteria_passed"] = passed;
  manifest["criteria_total"] = static_cast<int>(results.size());
  if (passed != static_cast<int>(results.size()))
    throw ComputeError("acceptance criteria failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bolax: spectral laboratory for the zero-dispersion Benjamin-Ono equation"};
  app.require_subcommand(1);
  app.fallthrough();  // allow the global flags after the subcommand

  std::string config_path, out_dir = "out", preset;
  int threads = 1;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--preset", preset, "potential preset overriding the config");

  const std::vector<std::string> commands = {"spectrum", "quantize", "evans",     "landscape",
                                             "burgers",  "evolve",   "weaklimit", "report"};
  for (const auto& c : commands) app.add_subcommand(c, "");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigInvalid("cannot read config file " + config_path);
      f >> cfg.raw;
    } else {
      cfg.raw = json::object();
    }
    if (!preset.empty()) cfg.raw["potential"] = preset;
    cfg.validate();
  } catch (const json::exception& e) {
    std::cerr << "ConfigInvalid: " << e.what() << "\n";
    return 2;
  } catch (const ConfigInvalid& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  thread_count() = threads;
  fs::create_directories(out_dir);
  json manifest = manifest_base(command, cfg);

  try {
    const fs::path out(out_dir);
    if (command == "spectrum") cmd_spectrum(cfg, out, manifest);
    else if (command == "quantize") cmd_quantize(cfg, out, manifest);
    else if (command == "evans") cmd_evans(cfg, out, manifest);
    else if (command == "landscape") cmd_landscape(cfg, out, manifest);
    else if (command == "burgers") cmd_burgers(cfg, out, manifest);
    else if (command == "evolve") cmd_evolve(cfg, out, manifest);
    else if (command == "weaklimit") cmd_weaklimit(cfg, out, manifest);
    else if (command == "report") cmd_report(cfg, out, manifest);
    manifest["status"] = "ok";
    write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  } catch (const ConfigInvalid& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    manifest["status"] = "error";
    manifest["error"] = e.what();
    write_file(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
