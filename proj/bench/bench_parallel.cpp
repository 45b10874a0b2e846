// Wall-clock comparison of the serial reference path against the OpenMP
// path for the Monte Carlo kernels, plus a bit-identity spot check.

#include <chrono>
#include <cstdio>

#include "rpmt/asymptotics.hpp"
#include "rpmt/harness.hpp"
#include "rpmt/models.hpp"
#include "rpmt/rp_test.hpp"
#include "rpmt/sampling.hpp"

using namespace rpmt;

namespace {

template <class Fn>
double time_ms(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double omp_ms, bool identical) {
  std::printf("%-28s serial %9.1f ms   openmp %9.1f ms   speedup %.2fx   %s\n", name, serial_ms,
              omp_ms, serial_ms / omp_ms, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
  RngStream root(2024);

  // rp statistic at the simulation-study scale
  {
    RngStream setup = root.substream("rp");
    RealizedCovariance cov = realize_covariance({RandomOrthoDecay{Decay::Slow}, 200}, setup);
    RngStream xs = setup.substream("x");
    RngStream ys = setup.substream("y");
    TwoSampleData data{sample_mvn(Vector::Zero(200), cov.sqrt_factor, 50, xs),
                       sample_mvn(Vector::Zero(200), cov.sqrt_factor, 50, ys)};
    RngStream proj = setup.substream("proj");
    double serial_val = 0.0, omp_val = 0.0;
    const double t_serial =
        time_ms([&] { serial_val = rp_statistic(data, 49, 400, proj, Exec::Serial); });
    const double t_omp = time_ms([&] { omp_val = rp_statistic(data, 49, 400, proj, Exec::OpenMP); });
    report("rp_statistic N=400", t_serial, t_omp, serial_val == omp_val);
  }

  // projected-divergence Monte Carlo
  {
    RngStream setup = root.substream("dbar");
    RealizedCovariance cov = realize_covariance({RandomOrthoDecay{Decay::Slow}, 100}, setup);
    RngStream ds = setup.substream("delta");
    Vector delta = sample_shift(ShiftModel{UniformSphere{1.0}}, cov, ds);
    RngStream frames = setup.substream("frames");
    McEstimate serial_mc{}, omp_mc{};
    const double t_serial =
        time_ms([&] { serial_mc = delta_bar_k_mc(delta, cov, 30, 4000, frames, Exec::Serial); });
    const double t_omp =
        time_ms([&] { omp_mc = delta_bar_k_mc(delta, cov, 30, 4000, frames, Exec::OpenMP); });
    report("delta_bar_k_mc M=4000", t_serial, t_omp, serial_mc.estimate == omp_mc.estimate);
  }

  // a reduced ROC experiment
  {
    ExperimentConfig cfg = setting_config(3);
    cfg.reps_null = 100;
    cfg.reps_alt = 100;
    cfg.projections = 30;
    cfg.seed = 7;
    std::map<Method, RocCurve> serial_curves, omp_curves;
    const double t_serial = time_ms([&] { serial_curves = run_setting(cfg, Exec::Serial); });
    const double t_omp = time_ms([&] { omp_curves = run_setting(cfg, Exec::OpenMP); });
    bool identical = true;
    for (const auto& [m, curve] : serial_curves) {
      identical = identical && curve.auc == omp_curves.at(m).auc &&
                  curve.points == omp_curves.at(m).points;
    }
    report("run_setting 100+100 reps", t_serial, t_omp, identical);
  }

  return 0;
}
