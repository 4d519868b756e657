#include "lrdfield/excursion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrdfield {

FunctionalResult excursion_volume(const FieldSample& sample, double u) {
  if (sample.values.empty()) throw std::invalid_argument("excursion_volume: empty sample");
  std::int64_t count = 0;
  for (double v : sample.values) count += (v >= u);
  FunctionalResult r;
  r.value = double(count) * sample.grid.cell_volume();
  r.window_volume = sample.grid.window_volume();
  r.level = u;
  r.replicate = sample.replicate;
  return r;
}

double integral_functional(const FieldSample& sample, const std::function<double(double)>& G) {
  if (sample.values.empty()) throw std::invalid_argument("integral_functional: empty sample");
  double sum = 0.0;
  for (std::size_t i = 0; i < sample.values.size(); ++i) {
    double g = G(sample.values[i]);
    if (!std::isfinite(g))
      throw std::runtime_error("integral_functional: non-finite G at node " + std::to_string(i));
    sum += g;
  }
  return sum * sample.grid.cell_volume();
}

double standardized_statistic(const FunctionalResult& result, double centering, double scale) {
  if (scale <= 0.0) throw std::invalid_argument("standardized_statistic: scale must be > 0");
  return (result.value - centering) / scale;
}

}  // namespace lrdfield
