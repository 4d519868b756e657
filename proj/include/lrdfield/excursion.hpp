#pragma once

#include <functional>

#include "lrdfield/grid.hpp"

namespace lrdfield {

struct FunctionalResult {
  double value = 0.0;          // volume units, cell_volume scaling
  double window_volume = 0.0;
  double level = 0.0;
  std::uint32_t replicate = 0;
};

// Riemann-sum excursion volume: cell_volume * #{nodes with value >= u}.
// Ties count as in the set.
FunctionalResult excursion_volume(const FieldSample& sample, double u);

// cell_volume * sum G(value); throws on non-finite G output, reporting the
// offending node.
double integral_functional(const FieldSample& sample, const std::function<double(double)>& G);

// (raw - centering) / scale with the inputs supplied by the normalizer.
double standardized_statistic(const FunctionalResult& result, double centering, double scale);

}  // namespace lrdfield
