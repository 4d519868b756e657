#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lrdfield/covariance.hpp"

namespace lrdfield {

enum class Verdict { satisfied, violated, inconclusive };

std::string verdict_name(Verdict v);

struct ConditionReport {
  std::string condition_id;
  std::vector<double> window_sizes;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

// Geometric probe ladder, `per_decade` points per decade of [lo, hi].
std::vector<double> probe_ladder(double lo, double hi, int per_decade = 8);

// Delta_n ratio: windowed integral of C^2 over windowed integral of C on
// cubes of the given sizes; a decay condition.
ConditionReport delta_ratio(const CovarianceModel& model, const std::vector<double>& window_sizes);

// prod_i r_i^{-1+delta} * int_{|t_i|<=r_i} C(t) dt along a ladder of window
// vectors; a divergence condition.
ConditionReport check_condcor2(const CovarianceModel& model,
                               const std::vector<std::vector<double>>& window_ladders, double delta);

// r^{-delta} int_0^r Ctilde(v) dv; a divergence condition on the temporal
// margin.
ConditionReport check_spatiotemporal(const std::function<double(double)>& temporal_cov,
                                     const std::vector<double>& r_sequence, double delta);

enum class LrdClass { short_range, long_range, inconclusive };

std::string lrd_class_name(LrdClass c);

// Growth fit of int_{||t||<=R} |C| for increasing R.
LrdClass lrd_classify(const CovarianceModel& model, const std::vector<double>& probe_radii);

}  // namespace lrdfield
