#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpmt/models.hpp"
#include "rpmt/parallel.hpp"
#include "rpmt/rng.hpp"
#include "rpmt/rp_test.hpp"

namespace rpmt {

enum class Method { Rp, Bs, Cq, Sd, Hotelling };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// One simulated experiment: covariance recipe, shift recipe, sample sizes
// and replication counts. Settings 1-10 cross five covariance choices
// (diagonal slow/fast, random slow/fast, block) with uniform (1-5) and
// tilted (6-10) shifts at p = 200, n1 = n2 = 50.
struct ExperimentConfig {
  int setting_id = 0;  // 1..10, or 0 for a custom model
  Index p = 200;
  Index n1 = 50;
  Index n2 = 50;
  Index reps_null = 500;
  Index reps_alt = 500;
  double alpha = 0.05;
  Index k = -1;  // -1: floor(n/2) clamped to min(n, p)
  Index projections = 100;
  std::vector<Method> methods = {Method::Rp, Method::Bs, Method::Cq, Method::Sd};
  std::uint64_t seed = 0;
  CovarianceModel covariance{IdentityCov{}, 200};
  ShiftModel shift{UniformSphere{1.0}};

  Index dof() const { return n1 + n2 - 2; }
  Index resolved_k() const;
};

ExperimentConfig setting_config(int id);

// JSON object mirroring the fields above; see README for the schema.
ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), both nondecreasing
  double auc = 0.0;
  std::string method;
  Index n_null = 0;
  Index n_alt = 0;
};

// Threshold sweep over the pooled scores, larger score = more evidence
// against the null; ties grouped; trapezoidal AUC.
RocCurve roc_from_scores(const std::vector<double>& null_scores,
                         const std::vector<double>& alt_scores);

// Runs reps_null + reps_alt fresh two-sample problems (fresh shift, and
// fresh covariance when the model is random) and scores every method on
// the same data. Replications are independent given per-replication
// substreams and execute under either policy with identical results.
std::map<Method, RocCurve> run_setting(const ExperimentConfig& config, Exec exec = Exec::OpenMP);

// run_setting with k = floor(y n) per grid point, projected test only.
// Data substreams do not depend on k, so curves are paired across y.
std::map<double, RocCurve> sweep_projection_dimension(const ExperimentConfig& config,
                                                      const std::vector<double>& y_grid,
                                                      Exec exec = Exec::OpenMP);

struct PValueStabilityResult {
  struct Entry {
    Index projections;
    std::vector<double> p_values;
    double min;
    double max;
    double stddev;
  };
  std::vector<Entry> entries;
};

// Repeatedly evaluates the N-projection p-value on one fixed dataset for
// each N in the grid.
PValueStabilityResult pvalue_stability(const TwoSampleData& data, const std::vector<Index>& n_grid,
                                       Index repeats, Index k, const RngStream& rng,
                                       Exec exec = Exec::OpenMP);

// The 3 x 5 grid of covariance summaries over the five covariance choices;
// random columns are averaged over fresh realizations.
struct Table1 {
  std::vector<std::string> columns;             // five covariance labels
  std::vector<std::string> rows;                // three summary labels
  std::vector<std::vector<double>> values;      // rows x columns
  std::string to_csv() const;
};

Table1 table1_report(Index n_random_draws, const RngStream& rng, Exec exec = Exec::OpenMP);

}  // namespace rpmt
