#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tle/dataset.hpp"
#include "tle/tensor.hpp"

namespace tle {

// Default finite-difference step for 64-bit gradient checks.
constexpr double kGradCheckStep = 1e-5;

// Central differences (f(x+h e_i) - f(x-h e_i)) / 2h per coordinate.
inline std::vector<double> finite_diff(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double step) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + step;
    const double fp = f(x);
    x[i] = xi - step;
    const double fm = f(x);
    x[i] = xi;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::runtime_error("finite_diff: non-finite f at coordinate " +
                               std::to_string(i));
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

inline double rel_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-8});
}

struct GradReport {
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
  std::size_t worst_coord = 0;
  std::size_t worst_trial = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  bool pass = true;
  std::string replay_path;  // failing instance dump, empty when passing

  void fold(const std::vector<double>& analytic,
            const std::vector<double>& numeric, std::size_t trial,
            double tol) {
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      const double re = rel_error(analytic[i], numeric[i]);
      if (re > max_rel_err) {
        max_rel_err = re;
        max_abs_err = std::abs(analytic[i] - numeric[i]);
        worst_coord = i;
        worst_trial = trial;
        worst_analytic = analytic[i];
        worst_numeric = numeric[i];
      }
    }
    pass = max_rel_err <= tol;
  }
};

// One randomized gradient-check instance: a scalar function of a flat
// vector, the point, and the analytic gradient claimed by the op under
// test. `replay` optionally carries the instance as feature maps so a
// failure can be dumped in the dataset format.
struct CheckCase {
  std::vector<double> x;
  std::function<double(const std::vector<double>&)> f;
  std::vector<double> analytic;
  std::vector<FeatureMap> replay;
};

// Runs `trials` random instances, failing fast on the first over-tolerance
// trial. On failure the offending instance (when provided) is written as a
// single-video TLEF file next to `replay_prefix`.
inline GradReport run_check(
    const std::function<CheckCase(std::uint64_t)>& make_case,
    std::size_t trials, double tol, double step = kGradCheckStep,
    const std::string& replay_prefix = "") {
  GradReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    CheckCase c = make_case(t);
    const auto numeric = finite_diff(c.f, c.x, step);
    if (numeric.size() != c.analytic.size())
      throw std::invalid_argument("run_check: gradient length mismatch");
    rep.fold(c.analytic, numeric, t, tol);
    if (!rep.pass) {
      if (!replay_prefix.empty() && !c.replay.empty()) {
        FeatureDataset dump;
        dump.classes = 2;
        dump.class_names = {"replay", "unused"};
        VideoRecord v;
        v.id = "failing_trial_" + std::to_string(t);
        v.maps = std::move(c.replay);
        dump.videos.push_back(std::move(v));
        rep.replay_path = replay_prefix + "_trial" + std::to_string(t) +
                          ".tlef";
        write_dataset(dump, rep.replay_path);
      }
      return rep;
    }
  }
  return rep;
}

}  // namespace tle
