#include "rpmt/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rpmt/baselines.hpp"
#include "rpmt/sampling.hpp"

namespace rpmt {

using nlohmann::json;

std::string method_name(Method m) {
  switch (m) {
    case Method::Rp: return "rp";
    case Method::Bs: return "bs";
    case Method::Cq: return "cq";
    case Method::Sd: return "sd";
    case Method::Hotelling: return "hotelling";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "rp") return Method::Rp;
  if (name == "bs") return Method::Bs;
  if (name == "cq") return Method::Cq;
  if (name == "sd") return Method::Sd;
  if (name == "hotelling") return Method::Hotelling;
  throw std::invalid_argument("unknown method '" + name + "'");
}

Index ExperimentConfig::resolved_k() const {
  if (k > 0) return k;
  return std::min(dof() / 2, std::min(dof(), p));
}

ExperimentConfig setting_config(int id) {
  if (id < 1 || id > 10) throw std::invalid_argument("setting id must lie in 1..10");
  ExperimentConfig cfg;
  cfg.setting_id = id;
  const int sigma_choice = (id - 1) % 5;  // 0..4
  switch (sigma_choice) {
    case 0: cfg.covariance = {DiagonalDecay{Decay::Slow}, cfg.p}; break;
    case 1: cfg.covariance = {DiagonalDecay{Decay::Fast}, cfg.p}; break;
    case 2: cfg.covariance = {RandomOrthoDecay{Decay::Slow}, cfg.p}; break;
    case 3: cfg.covariance = {RandomOrthoDecay{Decay::Fast}, cfg.p}; break;
    case 4: cfg.covariance = {Block{40, 5, 0.8}, cfg.p}; break;
  }
  if (id <= 5) {
    cfg.shift = ShiftModel{UniformSphere{1.0}};
  } else {
    cfg.shift = ShiftModel{Tilted{TiltRule::FixedNorm, 2.0}};
  }
  return cfg;
}

namespace {

CovarianceModel covariance_from_json(const json& j, Index p) {
  const std::string kind = j.at("kind").get<std::string>();
  auto decay_of = [&](const json& jj) {
    const std::string d = jj.value("decay", "slow");
    if (d == "slow") return Decay::Slow;
    if (d == "fast") return Decay::Fast;
    throw std::invalid_argument("covariance decay must be 'slow' or 'fast'");
  };
  if (kind == "diagonal_decay") return {DiagonalDecay{decay_of(j)}, p};
  if (kind == "random_ortho_decay") return {RandomOrthoDecay{decay_of(j)}, p};
  if (kind == "block") {
    return {Block{j.at("blocks").get<Index>(), j.at("block_size").get<Index>(),
                  j.at("rho").get<double>()},
            p};
  }
  if (kind == "identity") return {IdentityCov{}, p};
  if (kind == "explicit") {
    const auto& rows = j.at("matrix");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.at(0).size()));
    for (Index i = 0; i < m.rows(); ++i)
      for (Index c = 0; c < m.cols(); ++c) m(i, c) = rows.at(i).at(c).get<double>();
    return {ExplicitDense{std::move(m)}, static_cast<Index>(rows.size())};
  }
  if (kind == "identity_plus_low_rank") {
    const auto& rows = j.at("factor");
    Matrix v(static_cast<Index>(rows.size()), static_cast<Index>(rows.at(0).size()));
    for (Index i = 0; i < v.rows(); ++i)
      for (Index c = 0; c < v.cols(); ++c) v(i, c) = rows.at(i).at(c).get<double>();
    return {IdentityPlusLowRank{std::move(v)}, static_cast<Index>(rows.size())};
  }
  throw std::invalid_argument("unknown covariance kind '" + kind + "'");
}

ShiftModel shift_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return ShiftModel{Zero{}};
  if (kind == "uniform_sphere") return ShiftModel{UniformSphere{j.value("scale", 1.0)}};
  if (kind == "tilted") {
    const std::string rule = j.value("rule", "fixed_norm");
    if (rule == "fixed_norm") {
      return ShiftModel{Tilted{TiltRule::FixedNorm, j.value("scale", 2.0)}};
    }
    if (rule == "trace_scaled") return ShiftModel{Tilted{TiltRule::TraceScaled, 0.0}};
    throw std::invalid_argument("tilted shift rule must be 'fixed_norm' or 'trace_scaled'");
  }
  if (kind == "explicit") {
    const auto& arr = j.at("vector");
    Vector v(static_cast<Index>(arr.size()));
    for (Index i = 0; i < v.size(); ++i) v(i) = arr.at(i).get<double>();
    return ShiftModel{ExplicitVector{std::move(v)}};
  }
  throw std::invalid_argument("unknown shift kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  json j = json::parse(json_text);
  ExperimentConfig cfg;
  if (j.contains("setting") && !j.at("setting").is_null()) {
    cfg = setting_config(j.at("setting").get<int>());
  }
  cfg.p = j.value("p", cfg.p);
  cfg.n1 = j.value("n1", cfg.n1);
  cfg.n2 = j.value("n2", cfg.n2);
  cfg.reps_null = j.value("reps_null", cfg.reps_null);
  cfg.reps_alt = j.value("reps_alt", cfg.reps_alt);
  cfg.alpha = j.value("alpha", cfg.alpha);
  if (j.contains("k")) {
    if (j.at("k").is_string()) {
      if (j.at("k").get<std::string>() != "auto") {
        throw std::invalid_argument("config k must be an integer or \"auto\"");
      }
      cfg.k = -1;
    } else {
      cfg.k = j.at("k").get<Index>();
    }
  }
  cfg.projections = j.value("projections", cfg.projections);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(method_from_name(m.get<std::string>()));
  }
  if (j.contains("covariance")) {
    cfg.covariance = covariance_from_json(j.at("covariance"), cfg.p);
    cfg.setting_id = j.value("setting", 0);
  } else if (!j.contains("setting")) {
    cfg.covariance.dim = cfg.p;
  }
  if (j.contains("shift")) cfg.shift = shift_from_json(j.at("shift"));
  if (cfg.covariance.dim != cfg.p) cfg.covariance.dim = cfg.p;
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

RocCurve roc_from_scores(const std::vector<double>& null_scores,
                         const std::vector<double>& alt_scores) {
  if (null_scores.empty() || alt_scores.empty()) {
    throw std::invalid_argument("roc_from_scores: both score lists must be nonempty");
  }
  for (double v : null_scores) {
    if (!std::isfinite(v)) throw std::invalid_argument("roc_from_scores: non-finite null score");
  }
  for (double v : alt_scores) {
    if (!std::isfinite(v)) throw std::invalid_argument("roc_from_scores: non-finite alt score");
  }

  std::vector<double> nulls = null_scores;
  std::vector<double> alts = alt_scores;
  std::sort(nulls.begin(), nulls.end());
  std::sort(alts.begin(), alts.end());

  std::vector<double> thresholds;
  thresholds.reserve(nulls.size() + alts.size());
  thresholds.insert(thresholds.end(), nulls.begin(), nulls.end());
  thresholds.insert(thresholds.end(), alts.begin(), alts.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<double>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  RocCurve curve;
  curve.n_null = static_cast<Index>(nulls.size());
  curve.n_alt = static_cast<Index>(alts.size());
  curve.points.emplace_back(0.0, 0.0);
  const double nn = static_cast<double>(nulls.size());
  const double na = static_cast<double>(alts.size());
  for (double t : thresholds) {
    const auto fp = nulls.end() - std::lower_bound(nulls.begin(), nulls.end(), t);
    const auto tp = alts.end() - std::lower_bound(alts.begin(), alts.end(), t);
    curve.points.emplace_back(static_cast<double>(fp) / nn, static_cast<double>(tp) / na);
  }

  double auc = 0.0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& [x0, y0] = curve.points[i - 1];
    const auto& [x1, y1] = curve.points[i];
    auc += (x1 - x0) * (y1 + y0) * 0.5;
  }
  curve.auc = auc;
  return curve;
}

namespace {

double method_score(Method m, const TwoSampleData& data, const ExperimentConfig& cfg,
                    const RngStream& proj_stream) {
  switch (m) {
    case Method::Rp:
      return run_rp_test(data, cfg.resolved_k(), cfg.projections, cfg.alpha, proj_stream,
                         Exec::Serial)
          .z_score;
    case Method::Bs: return bs_statistic(data, cfg.alpha).z_score;
    case Method::Cq: return cq_statistic(data, cfg.alpha).z_score;
    case Method::Sd: return sd_statistic(data, cfg.alpha).z_score;
    case Method::Hotelling: return run_hotelling_test(data, cfg.alpha).z_score;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::map<Method, RocCurve> run_setting(const ExperimentConfig& cfg, Exec exec) {
  if (cfg.reps_null < 1 || cfg.reps_alt < 1) {
    throw std::invalid_argument("run_setting: replication counts must be >= 1");
  }
  const Index k = cfg.resolved_k();
  if (k < 1 || k > std::min(cfg.dof(), cfg.p)) {
    throw std::invalid_argument("run_setting: k must satisfy 1 <= k <= min(n, p)");
  }
  if (cfg.methods.empty()) throw std::invalid_argument("run_setting: no methods selected");

  RngStream root(cfg.seed);
  RngStream exp_stream =
      root.substream("experiment").substream(static_cast<std::uint64_t>(cfg.setting_id));

  const bool fresh_sigma = covariance_is_random(cfg.covariance);
  RealizedCovariance shared_cov;
  if (!fresh_sigma) {
    RngStream unused = exp_stream.substream("sigma-static");
    shared_cov = realize_covariance(cfg.covariance, unused);
  }

  std::vector<std::array<std::vector<double>, 2>> scores(cfg.methods.size());
  for (auto& s : scores) {
    s[0].resize(static_cast<std::size_t>(cfg.reps_null));
    s[1].resize(static_cast<std::size_t>(cfg.reps_alt));
  }

  for (int phase = 0; phase < 2; ++phase) {
    const Index reps = phase == 0 ? cfg.reps_null : cfg.reps_alt;
    RngStream phase_stream = exp_stream.substream(phase == 0 ? "null" : "alt");
    FirstError err;
    parallel_for(reps, exec, [&](std::int64_t r) {
      err.capture(r, [&] {
        try {
          RngStream rep_stream = phase_stream.substream(static_cast<std::uint64_t>(r));
          const RealizedCovariance* cov = &shared_cov;
          RealizedCovariance local_cov;
          if (fresh_sigma) {
            RngStream sigma_stream = rep_stream.substream("sigma");
            local_cov = realize_covariance(cfg.covariance, sigma_stream);
            cov = &local_cov;
          }
          Vector delta = Vector::Zero(cfg.p);
          if (phase == 1) {
            RngStream delta_stream = rep_stream.substream("delta");
            delta = sample_shift(cfg.shift, *cov, delta_stream);
          }
          RngStream x_stream = rep_stream.substream("x");
          RngStream y_stream = rep_stream.substream("y");
          TwoSampleData data{sample_mvn(delta, cov->sqrt_factor, cfg.n1, x_stream),
                             sample_mvn(Vector::Zero(cfg.p), cov->sqrt_factor, cfg.n2, y_stream)};
          RngStream proj_stream = rep_stream.substream("proj");
          for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
            scores[mi][phase][static_cast<std::size_t>(r)] =
                method_score(cfg.methods[mi], data, cfg, proj_stream);
          }
        } catch (const std::exception& e) {
          throw std::runtime_error("replication " + std::to_string(r) +
                                   (phase == 0 ? " (null): " : " (alt): ") + e.what());
        }
      });
    });
    err.rethrow_if_any();
  }

  std::map<Method, RocCurve> out;
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    RocCurve curve = roc_from_scores(scores[mi][0], scores[mi][1]);
    curve.method = method_name(cfg.methods[mi]);
    out[cfg.methods[mi]] = std::move(curve);
  }
  return out;
}

std::map<double, RocCurve> sweep_projection_dimension(const ExperimentConfig& config,
                                                      const std::vector<double>& y_grid,
                                                      Exec exec) {
  std::map<double, RocCurve> out;
  for (double y : y_grid) {
    if (!(y > 0.0 && y < 1.0)) {
      throw std::invalid_argument("sweep_projection_dimension: y values must lie in (0, 1)");
    }
    const Index k = static_cast<Index>(std::floor(y * static_cast<double>(config.dof())));
    if (k < 1) throw std::invalid_argument("sweep_projection_dimension: floor(y n) must be >= 1");
    ExperimentConfig cfg = config;
    cfg.k = k;
    cfg.methods = {Method::Rp};
    out[y] = run_setting(cfg, exec).at(Method::Rp);
  }
  return out;
}

PValueStabilityResult pvalue_stability(const TwoSampleData& data, const std::vector<Index>& n_grid,
                                       Index repeats, Index k, const RngStream& rng, Exec exec) {
  if (repeats < 2) throw std::invalid_argument("pvalue_stability: need at least 2 repeats");
  if (n_grid.empty()) throw std::invalid_argument("pvalue_stability: empty projection grid");

  PValueStabilityResult out;
  for (Index n_proj : n_grid) {
    PValueStabilityResult::Entry entry;
    entry.projections = n_proj;
    entry.p_values.resize(static_cast<std::size_t>(repeats));
    RngStream grid_stream = rng.substream("pvalue").substream(static_cast<std::uint64_t>(n_proj));
    FirstError err;
    parallel_for(repeats, exec, [&](std::int64_t j) {
      err.capture(j, [&] {
        RngStream s = grid_stream.substream(static_cast<std::uint64_t>(j));
        entry.p_values[static_cast<std::size_t>(j)] =
            run_rp_test(data, k, n_proj, 0.05, s, Exec::Serial).p_value;
      });
    });
    err.rethrow_if_any();

    const auto [mn, mx] = std::minmax_element(entry.p_values.begin(), entry.p_values.end());
    entry.min = *mn;
    entry.max = *mx;
    double mean = 0.0;
    for (double v : entry.p_values) mean += v;
    mean /= static_cast<double>(repeats);
    double ss = 0.0;
    for (double v : entry.p_values) ss += (v - mean) * (v - mean);
    entry.stddev = std::sqrt(ss / static_cast<double>(repeats - 1));
    out.entries.push_back(std::move(entry));
  }
  return out;
}

Table1 table1_report(Index n_random_draws, const RngStream& rng, Exec exec) {
  if (n_random_draws < 1) throw std::invalid_argument("table1_report: need at least one draw");
  Table1 table;
  table.columns = {"diagonal_slow", "diagonal_fast", "random_slow", "random_fast", "block"};
  table.rows = {"cq_dim", "sd_unif", "sd_tilt"};
  table.values.assign(3, std::vector<double>(5, 0.0));

  const Index p = 200;
  const std::vector<CovarianceModel> models = {
      {DiagonalDecay{Decay::Slow}, p}, {DiagonalDecay{Decay::Fast}, p},
      {RandomOrthoDecay{Decay::Slow}, p}, {RandomOrthoDecay{Decay::Fast}, p},
      {Block{40, 5, 0.8}, p}};

  for (std::size_t col = 0; col < models.size(); ++col) {
    const bool random = covariance_is_random(models[col]);
    const Index draws = random ? n_random_draws : 1;
    std::vector<CovSummaries> all(static_cast<std::size_t>(draws));
    RngStream col_stream = rng.substream("table1").substream(col);
    FirstError err;
    parallel_for(draws, exec, [&](std::int64_t d) {
      err.capture(d, [&] {
        RngStream s = col_stream.substream(static_cast<std::uint64_t>(d));
        all[static_cast<std::size_t>(d)] =
            covariance_summaries(realize_covariance(models[col], s));
      });
    });
    err.rethrow_if_any();
    double cq = 0.0, su = 0.0, st = 0.0;
    for (const auto& s : all) {
      cq += s.cq_dim;
      su += s.sd_unif;
      st += s.sd_tilt;
    }
    table.values[0][col] = cq / static_cast<double>(draws);
    table.values[1][col] = su / static_cast<double>(draws);
    table.values[2][col] = st / static_cast<double>(draws);
  }
  return table;
}

std::string Table1::to_csv() const {
  std::ostringstream out;
  out.precision(8);
  out << "quantity";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r];
    for (std::size_t c = 0; c < columns.size(); ++c) out << ',' << values[r][c];
    out << '\n';
  }
  return out.str();
}

}  // namespace rpmt
