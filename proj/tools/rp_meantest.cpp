// rp-meantest: two-sample mean testing in high dimensions with a
// projection-averaged Hotelling statistic, plus the simulation harness and
// oracle suites around it.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rpmt/baselines.hpp"
#include "rpmt/harness.hpp"
#include "rpmt/io.hpp"
#include "rpmt/models.hpp"
#include "rpmt/rp_test.hpp"
#include "rpmt/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rpmt;

namespace {

json outcome_to_json(const TestOutcome& o, std::uint64_t seed) {
  json j{{"method", o.method},   {"statistic", o.statistic}, {"z", o.z_score},
         {"p_value", o.p_value}, {"reject", o.reject},       {"alpha", o.alpha},
         {"n1", o.n1},           {"n2", o.n2},               {"p", o.p},
         {"seed", seed}};
  if (o.k > 0) j["k"] = o.k;
  if (o.projections > 0) j["N"] = o.projections;
  return j;
}

std::vector<Index> parse_index_list(const std::string& csv) {
  std::vector<Index> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(static_cast<Index>(std::stoll(tok)));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(method_from_name(tok));
  }
  return out;
}

ExperimentConfig config_from_setting_arg(const std::string& arg) {
  try {
    const int id = std::stoi(arg);
    if (std::to_string(id) == arg) return setting_config(id);
  } catch (const std::exception&) {
    // fall through to file loading
  }
  return load_config(arg);
}

void write_roc_outputs(const ExperimentConfig& cfg, const std::string& tag,
                       const std::map<Method, RocCurve>& curves, const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (const auto& [method, curve] : curves) {
    const std::string stem = tag + "_" + curve.method;
    std::ofstream csv(fs::path(out_dir) / (stem + ".csv"));
    csv << "fpr,tpr\n";
    csv.precision(10);
    for (const auto& [fpr, tpr] : curve.points) csv << fpr << ',' << tpr << '\n';

    json manifest{{"setting", cfg.setting_id},
                  {"method", curve.method},
                  {"auc", curve.auc},
                  {"seed", cfg.seed},
                  {"reps_null", cfg.reps_null},
                  {"reps_alt", cfg.reps_alt},
                  {"k", cfg.resolved_k()},
                  {"N", cfg.projections},
                  {"alpha", cfg.alpha},
                  {"p", cfg.p},
                  {"n1", cfg.n1},
                  {"n2", cfg.n2}};
    std::ofstream mf(fs::path(out_dir) / (stem + ".json"));
    mf << manifest.dump(2) << '\n';
  }
}

json checks_to_json(const std::string& suite, const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    arr.push_back(json{{"name", c.name},
                       {"pass", c.pass},
                       {"value", c.value},
                       {"target", c.target},
                       {"std_error", c.std_error},
                       {"note", c.note}});
  }
  return json{{"suite", suite}, {"checks", arr}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-projection averaged Hotelling two-sample mean test"};
  app.require_subcommand(1);

  // ---- test ----
  auto* test_cmd = app.add_subcommand("test", "run one two-sample test on CSV data");
  std::string x_path, y_path;
  std::string method_arg = "rp";
  Index k_arg = -1;
  Index projections_arg = 100;
  double alpha_arg = 0.05;
  std::uint64_t seed_arg = 0;
  std::string format_arg = "json";
  test_cmd->add_option("--x", x_path, "CSV with group-1 observations, one per row")->required();
  test_cmd->add_option("--y", y_path, "CSV with group-2 observations, one per row")->required();
  test_cmd->add_option("--method", method_arg, "rp|bs|cq|sd|hotelling (default rp)");
  test_cmd->add_option("--k", k_arg, "projection dimension (default floor(n/2), clamped)");
  test_cmd->add_option("--projections", projections_arg, "number of averaged projections");
  test_cmd->add_option("--alpha", alpha_arg, "test level");
  test_cmd->add_option("--seed", seed_arg, "master seed");
  test_cmd->add_option("--format", format_arg, "json|csv output");

  // ---- simulate ----
  auto* sim_cmd = app.add_subcommand("simulate", "ROC study over one simulation setting");
  std::string setting_arg;
  Index reps_arg = -1;
  std::string methods_arg;
  Index sim_projections = -1;
  std::string k_str = "auto";
  std::uint64_t sim_seed = 0;
  std::string out_dir = "out";
  double sim_alpha = 0.05;
  sim_cmd->add_option("--setting", setting_arg, "setting id 1..10 or a JSON config file")
      ->required();
  sim_cmd->add_option("--reps", reps_arg, "replications per hypothesis (default 500)");
  sim_cmd->add_option("--methods", methods_arg, "comma list from rp,bs,cq,sd,hotelling");
  sim_cmd->add_option("--projections", sim_projections, "projections averaged by the rp method");
  sim_cmd->add_option("--k", k_str, "projection dimension or 'auto'");
  sim_cmd->add_option("--seed", sim_seed, "master seed");
  sim_cmd->add_option("--alpha", sim_alpha, "nominal level recorded in manifests");
  sim_cmd->add_option("--out", out_dir, "output directory for fpr/tpr CSVs and manifests");

  // ---- sweep-k ----
  auto* sweep_cmd = app.add_subcommand("sweep-k", "projection-dimension sweep, rp method only");
  std::string sweep_setting;
  std::string ys_arg = "0.1,0.3,0.5,0.7,0.9";
  Index sweep_reps = -1;
  Index sweep_projections = 100;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out = "out";
  sweep_cmd->add_option("--setting", sweep_setting, "setting id 1..10 or a JSON config file")
      ->required();
  sweep_cmd->add_option("--ys", ys_arg, "comma list of projection ratios y = k/n");
  sweep_cmd->add_option("--reps", sweep_reps, "replications per hypothesis (default 500)");
  sweep_cmd->add_option("--projections", sweep_projections, "projections averaged per statistic");
  sweep_cmd->add_option("--seed", sweep_seed, "master seed");
  sweep_cmd->add_option("--out", sweep_out, "output directory");

  // ---- pvalue-stability ----
  auto* pv_cmd = app.add_subcommand("pvalue-stability",
                                    "repeated p-values on one dataset across projection counts");
  std::string pv_x, pv_y;
  std::string ns_arg = "100,1000,10000";
  Index repeats_arg = 100;
  Index pv_k = -1;
  std::uint64_t pv_seed = 0;
  pv_cmd->add_option("--x", pv_x, "CSV with group-1 observations")->required();
  pv_cmd->add_option("--y", pv_y, "CSV with group-2 observations")->required();
  pv_cmd->add_option("--ns", ns_arg, "comma list of projection counts");
  pv_cmd->add_option("--repeats", repeats_arg, "independent p-values per count");
  pv_cmd->add_option("--k", pv_k, "projection dimension (default floor(n/2), clamped)");
  pv_cmd->add_option("--seed", pv_seed, "master seed");

  // ---- table1 ----
  auto* table_cmd = app.add_subcommand("table1", "covariance summary grid over the five models");
  Index draws_arg = 500;
  std::uint64_t table_seed = 0;
  std::string table_out;
  table_cmd->add_option("--draws", draws_arg, "realizations averaged for random models");
  table_cmd->add_option("--seed", table_seed, "master seed");
  table_cmd->add_option("--out", table_out, "write CSV here instead of stdout");

  // ---- validate ----
  auto* val_cmd = app.add_subcommand("validate", "run the Monte Carlo oracle suites");
  std::string suite_arg = "all";
  std::uint64_t val_seed = 7;
  val_cmd->add_option("--suite", suite_arg, "lemmas|wishart|scaling|all");
  val_cmd->add_option("--seed", val_seed, "master seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test_cmd) {
      TwoSampleData data = make_two_sample(read_matrix_csv(x_path), read_matrix_csv(y_path));
      const Index k = k_arg > 0 ? k_arg : default_projection_dim(data);
      TestOutcome outcome;
      const Method method = method_from_name(method_arg);
      RngStream rng(seed_arg);
      switch (method) {
        case Method::Rp:
          outcome = run_rp_test(data, k, projections_arg, alpha_arg, rng.substream("test"));
          break;
        case Method::Bs: outcome = bs_statistic(data, alpha_arg); break;
        case Method::Cq: outcome = cq_statistic(data, alpha_arg); break;
        case Method::Sd: outcome = sd_statistic(data, alpha_arg); break;
        case Method::Hotelling: outcome = run_hotelling_test(data, alpha_arg); break;
      }
      if (format_arg == "csv") {
        std::cout << "method,statistic,z,p_value,reject,k,N,n1,n2,p,seed\n"
                  << outcome.method << ',' << outcome.statistic << ',' << outcome.z_score << ','
                  << outcome.p_value << ',' << (outcome.reject ? 1 : 0) << ',' << outcome.k << ','
                  << outcome.projections << ',' << outcome.n1 << ',' << outcome.n2 << ','
                  << outcome.p << ',' << seed_arg << '\n';
      } else {
        std::cout << outcome_to_json(outcome, seed_arg).dump(2) << '\n';
      }
      return 0;
    }

    if (*sim_cmd) {
      ExperimentConfig cfg = config_from_setting_arg(setting_arg);
      if (reps_arg > 0) {
        cfg.reps_null = reps_arg;
        cfg.reps_alt = reps_arg;
      }
      if (!methods_arg.empty()) cfg.methods = parse_methods(methods_arg);
      if (sim_projections > 0) cfg.projections = sim_projections;
      if (k_str != "auto") cfg.k = static_cast<Index>(std::stoll(k_str));
      cfg.seed = sim_seed;
      cfg.alpha = sim_alpha;
      auto curves = run_setting(cfg);
      const std::string tag = "setting" + std::to_string(cfg.setting_id);
      write_roc_outputs(cfg, tag, curves, out_dir);
      for (const auto& [m, curve] : curves) {
        std::cout << tag << ' ' << curve.method << " auc=" << curve.auc << '\n';
      }
      return 0;
    }

    if (*sweep_cmd) {
      ExperimentConfig cfg = config_from_setting_arg(sweep_setting);
      if (sweep_reps > 0) {
        cfg.reps_null = sweep_reps;
        cfg.reps_alt = sweep_reps;
      }
      cfg.projections = sweep_projections;
      cfg.seed = sweep_seed;
      auto curves = sweep_projection_dimension(cfg, parse_double_list(ys_arg));
      for (const auto& [y, curve] : curves) {
        ExperimentConfig tagged = cfg;
        tagged.k = static_cast<Index>(std::floor(y * static_cast<double>(cfg.dof())));
        std::ostringstream tag;
        tag << "setting" << cfg.setting_id << "_y" << y;
        write_roc_outputs(tagged, tag.str(), {{Method::Rp, curve}}, sweep_out);
        std::cout << "y=" << y << " k=" << tagged.k << " auc=" << curve.auc << '\n';
      }
      return 0;
    }

    if (*pv_cmd) {
      TwoSampleData data = make_two_sample(read_matrix_csv(pv_x), read_matrix_csv(pv_y));
      const Index k = pv_k > 0 ? pv_k : default_projection_dim(data);
      RngStream rng(pv_seed);
      PValueStabilityResult res =
          pvalue_stability(data, parse_index_list(ns_arg), repeats_arg, k, rng);
      json out = json::array();
      for (const auto& e : res.entries) {
        out.push_back(json{{"N", e.projections},
                           {"repeats", e.p_values.size()},
                           {"min", e.min},
                           {"max", e.max},
                           {"std", e.stddev},
                           {"p_values", e.p_values}});
      }
      std::cout << json{{"k", k}, {"seed", pv_seed}, {"grid", out}}.dump(2) << '\n';
      return 0;
    }

    if (*table_cmd) {
      RngStream rng(table_seed);
      Table1 table = table1_report(draws_arg, rng);
      if (table_out.empty()) {
        std::cout << table.to_csv();
      } else {
        std::ofstream f(table_out);
        f << table.to_csv();
      }
      return 0;
    }

    if (*val_cmd) {
      json suites = json::array();
      int failures = 0;
      auto run_suite = [&](const std::string& name, auto&& fn) {
        std::vector<CheckResult> checks = fn(val_seed, Exec::OpenMP);
        for (const auto& c : checks) failures += c.pass ? 0 : 1;
        suites.push_back(checks_to_json(name, checks));
      };
      if (suite_arg == "lemmas" || suite_arg == "all") run_suite("lemmas", validate_lemmas);
      if (suite_arg == "wishart" || suite_arg == "all") run_suite("wishart", validate_wishart);
      if (suite_arg == "scaling" || suite_arg == "all") run_suite("scaling", validate_scaling);
      if (suites.empty()) {
        std::cerr << "unknown suite '" << suite_arg << "'\n";
        return 2;
      }
      std::cout << json{{"seed", val_seed}, {"failures", failures}, {"suites", suites}}.dump(2)
                << '\n';
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
