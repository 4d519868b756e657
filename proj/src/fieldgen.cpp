#include "lrdfield/fieldgen.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <mutex>
#include <thread>

#include "lrdfield/mathutil.hpp"

namespace lrdfield {

namespace {

constexpr std::uint32_t kLaneNoise = 1;
constexpr std::uint32_t kLaneVolatility = 2;

std::mutex g_fftw_mutex;

struct FftwBuffer {
  fftw_complex* data = nullptr;
  explicit FftwBuffer(std::size_t n) { data = fftw_alloc_complex(n); }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

void fft_nd(fftw_complex* data, const std::vector<int>& dims, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    plan = fftw_plan_dft(int(dims.size()), dims.data(), data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
}

}  // namespace

GridSpec GridSpec::line(double r, double h) {
  GridSpec g;
  g.dim = 1;
  g.extent = {r, 1.0, 1.0};
  g.mesh = {h, 1.0, 1.0};
  g.validate();
  return g;
}

GridSpec GridSpec::box2(double r1, double r2, double h1, double h2) {
  GridSpec g;
  g.dim = 2;
  g.extent = {r1, r2, 1.0};
  g.mesh = {h1, h2, 1.0};
  g.validate();
  return g;
}

GridSpec GridSpec::box3(double r1, double r2, double r3, double h) {
  GridSpec g;
  g.dim = 3;
  g.extent = {r1, r2, r3};
  g.mesh = {h, h, h};
  g.validate();
  return g;
}

int GridSpec::nodes(int axis) const { return int(std::floor(extent[axis] / mesh[axis])); }

std::int64_t GridSpec::total_nodes() const {
  std::int64_t n = 1;
  for (int a = 0; a < dim; ++a) n *= nodes(a);
  return n;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= mesh[a];
  return v;
}

double GridSpec::window_volume() const { return double(total_nodes()) * cell_volume(); }

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("GridSpec: dim must be 1..3");
  for (int a = 0; a < dim; ++a) {
    if (extent[a] <= 0.0 || mesh[a] <= 0.0) throw std::invalid_argument("GridSpec: extent/mesh must be > 0");
    if (nodes(a) < 2) throw std::invalid_argument("GridSpec: need >= 2 nodes per axis");
  }
  if (total_nodes() > kMaxNodes) throw resource_error("GridSpec: node count exceeds memory cap");
}

FieldSample simulate_stationary(const CovarianceModel& model, const GridSpec& grid,
                                std::uint64_t seed, std::uint32_t replicate) {
  grid.validate();
  if (model.dim() != grid.dim) throw std::invalid_argument("simulate_stationary: dim mismatch");

  FieldSample out;
  out.grid = grid;
  out.seed = seed;
  out.replicate = replicate;
  out.model_tag = model.name();

  PhiloxStream rng(seed, PhiloxStream::stream_id(replicate, kLaneNoise, 0));

  if (grid.dim == 1) {
    CirculantFactor1D factor([&](double v) { return model.at1(v); }, grid.nodes(0), grid.mesh[0]);
    out.approximate = factor.approximate();
    out.values = factor.sample(rng);
    return out;
  }

  // d-dimensional embedding: wrapped covariance block, joint spectrum,
  // doubling all axes until nonnegative (cap 4), then clipping.
  std::vector<int> n(grid.dim);
  for (int a = 0; a < grid.dim; ++a) n[a] = grid.nodes(a);

  std::vector<int> m(grid.dim);
  bool approximate = false;
  std::vector<double> sqrt_eig;
  std::int64_t total_m = 0;
  for (int attempt = 0;; ++attempt) {
    total_m = 1;
    for (int a = 0; a < grid.dim; ++a) {
      m[a] = next_fast_size((2 * (n[a] - 1) + 2) << attempt);
      total_m *= m[a];
    }
    if (total_m > (std::int64_t(1) << 25))
      throw resource_error("simulate_stationary: embedding exceeds memory cap");
    FftwBuffer block(total_m);
    std::vector<double> lag(grid.dim);
    for (std::int64_t idx = 0; idx < total_m; ++idx) {
      std::int64_t rem = idx;
      for (int a = grid.dim - 1; a >= 0; --a) {
        int k = int(rem % m[a]);
        rem /= m[a];
        lag[a] = std::min(k, m[a] - k) * grid.mesh[a];
      }
      block.data[idx][0] = model(lag);
      block.data[idx][1] = 0.0;
    }
    fft_nd(block.data, m, FFTW_FORWARD);
    double max_eig = 0.0, min_eig = 0.0;
    for (std::int64_t idx = 0; idx < total_m; ++idx) {
      max_eig = std::max(max_eig, block.data[idx][0]);
      min_eig = std::min(min_eig, block.data[idx][0]);
    }
    if (min_eig >= -1e-8 * max_eig || attempt == 4) {
      approximate = min_eig < -1e-8 * max_eig;
      sqrt_eig.resize(total_m);
      for (std::int64_t idx = 0; idx < total_m; ++idx)
        sqrt_eig[idx] = std::sqrt(std::max(block.data[idx][0], 0.0) / double(total_m));
      break;
    }
  }

  FftwBuffer freq(total_m);
  for (std::int64_t idx = 0; idx < total_m; ++idx) {
    freq.data[idx][0] = rng.normal() * sqrt_eig[idx];
    freq.data[idx][1] = rng.normal() * sqrt_eig[idx];
  }
  fft_nd(freq.data, m, FFTW_BACKWARD);

  out.approximate = approximate;
  out.values.resize(grid.total_nodes());
  std::vector<int> ix(grid.dim, 0);
  for (std::int64_t i = 0; i < std::int64_t(out.values.size()); ++i) {
    std::int64_t src = 0;
    for (int a = 0; a < grid.dim; ++a) src = src * m[a] + ix[a];
    out.values[i] = freq.data[src][0];
    for (int a = grid.dim - 1; a >= 0; --a) {
      if (++ix[a] < n[a]) break;
      ix[a] = 0;
    }
  }
  return out;
}

std::vector<double> simulate_nonstationary(
    const std::function<double(const std::vector<double>&, const std::vector<double>&)>& rho,
    const std::vector<std::vector<double>>& points, std::uint64_t seed, std::uint32_t replicate) {
  const int n = int(points.size());
  if (n == 0 || n > 4096) throw std::invalid_argument("simulate_nonstationary: 1..4096 points");

  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = rho(points[i], points[j]);
      gram(i, j) = v;
      gram(j, i) = v;
    }

  // LDLT tolerates the semidefinite cases (degenerate fields) exactly;
  // diagonal jitter escalates only if the factorization sees negative pivots
  Eigen::LDLT<Eigen::MatrixXd> ldlt;
  bool ok = false;
  for (double jitter : {0.0, 1e-12, 1e-10, 1e-8}) {
    Eigen::MatrixXd g = gram;
    g.diagonal().array() += jitter;
    ldlt.compute(g);
    double d_min = ldlt.vectorD().minCoeff();
    if (ldlt.info() == Eigen::Success && d_min > -1e-9 * std::max(1.0, ldlt.vectorD().maxCoeff())) {
      ok = true;
      break;
    }
  }
  if (!ok) throw model_error("simulate_nonstationary: Gram matrix not positive semidefinite");

  PhiloxStream rng(seed, PhiloxStream::stream_id(replicate, kLaneNoise, 0));
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();
  Eigen::VectorXd scaled = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt().asDiagonal() * z;
  Eigen::VectorXd y = ldlt.transpositionsP().transpose() * (ldlt.matrixL() * scaled);
  return std::vector<double>(y.data(), y.data() + n);
}

double VolatilityLaw::draw(std::uint64_t seed, std::uint32_t replicate) const {
  if (kind == VolatilityKind::constant) return param;
  PhiloxStream rng(seed, PhiloxStream::stream_id(replicate, kLaneVolatility, 0));
  // xi = u / |Psi^{-1}(U)| gives xi^2 ~ Levy(0, u^2).
  double quantile = normal_tail_inverse(rng.uniform());
  return param / std::abs(quantile);
}

FieldSample simulate_random_volatility(const CovarianceModel& base, const VolatilityLaw& xi,
                                       const GridSpec& grid, std::uint64_t seed,
                                       std::uint32_t replicate) {
  FieldSample sample = simulate_stationary(base, grid, seed, replicate);
  double scale = xi.draw(seed, replicate);
  for (double& v : sample.values) v *= scale;
  sample.model_tag += "*xi";
  return sample;
}

FieldSample subordinate(const Subordinator& f, FieldSample sample) {
  constexpr double kMax = std::numeric_limits<double>::max();
  std::int64_t saturated = 0;
  for (double& v : sample.values) {
    double y = f(v);
    if (std::isinf(y)) {
      y = (y > 0.0) ? kMax : -kMax;
      ++saturated;
    }
    v = y;
  }
  sample.saturation_count += saturated;
  sample.model_tag += "|" + f.name();
  return sample;
}

FgnKroneckerSampler::FgnKroneckerSampler(std::vector<double> hurst, const GridSpec& grid)
    : hurst_(std::move(hurst)), grid_(grid) {
  grid_.validate();
  if (int(hurst_.size()) != grid_.dim) throw std::invalid_argument("fgn: Hurst/grid dim mismatch");
  for (double h : hurst_)
    if (h <= 0.0 || h >= 1.0) throw std::invalid_argument("fgn: H in (0,1)");

  row_axis_ = 0;
  for (int a = 1; a < grid_.dim; ++a)
    if (grid_.nodes(a) > grid_.nodes(row_axis_)) row_axis_ = a;

  double h_row = hurst_[row_axis_];
  double mesh_row = grid_.mesh[row_axis_];
  row_factor_ = std::make_unique<CirculantFactor1D>(
      [h_row](double v) { return 0.5 * rho_alpha(h_row, v); }, grid_.nodes(row_axis_), mesh_row);

  for (int a = 0; a < grid_.dim; ++a) {
    if (a == row_axis_) continue;
    other_axes_.push_back(a);
    const int n = grid_.nodes(a);
    if (n > 4096) throw resource_error("fgn: more than one long axis is unsupported");
    Eigen::MatrixXd gram(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = 0.5 * rho_alpha(hurst_[a], double(i - j) * grid_.mesh[a]);
        gram(i, j) = v;
        gram(j, i) = v;
      }
    gram.diagonal().array() += 1e-12;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw model_error("fgn: Toeplitz factor not PD");
    Eigen::MatrixXd L = llt.matrixL();
    std::vector<double> flat(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) flat[std::size_t(i) * n + j] = L(i, j);
    mix_factors_.push_back(std::move(flat));
  }
}

void FgnKroneckerSampler::fill_rows(std::uint64_t seed, std::uint32_t replicate,
                                    std::vector<double>& buffer, int threads) const {
  // buffer layout: [row_index][along row_axis], rows = all other-axis tuples.
  const std::int64_t n_row = grid_.nodes(row_axis_);
  const std::int64_t rows = grid_.total_nodes() / n_row;
  const std::int64_t pairs = (rows + 1) / 2;

  auto work = [&](std::int64_t pair_begin, std::int64_t pair_end) {
    std::vector<double> a, b;
    for (std::int64_t p = pair_begin; p < pair_end; ++p) {
      PhiloxStream rng(seed, PhiloxStream::stream_id(replicate, kLaneNoise, std::uint32_t(p)));
      row_factor_->sample_pair(rng, a, b);
      std::memcpy(&buffer[(2 * p) * n_row], a.data(), std::size_t(n_row) * sizeof(double));
      if (2 * p + 1 < rows)
        std::memcpy(&buffer[(2 * p + 1) * n_row], b.data(), std::size_t(n_row) * sizeof(double));
    }
  };

  if (threads <= 1 || pairs < 4) {
    work(0, pairs);
    return;
  }
  std::vector<std::thread> pool;
  std::int64_t chunk = (pairs + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::int64_t b0 = t * chunk, b1 = std::min(pairs, b0 + chunk);
    if (b0 >= b1) break;
    pool.emplace_back(work, b0, b1);
  }
  for (auto& th : pool) th.join();
}

FieldSample simulate_fgn(const std::vector<double>& hurst, const GridSpec& grid,
                         std::uint64_t seed, std::uint32_t replicate) {
  FgnKroneckerSampler sampler(hurst, grid);
  return sampler.sample_field(seed, replicate);
}

FieldSample FgnKroneckerSampler::sample_field(std::uint64_t seed, std::uint32_t replicate) const {
  FieldSample out;
  out.grid = grid_;
  out.seed = seed;
  out.replicate = replicate;
  out.model_tag = "fgn_product";
  out.approximate = row_factor_->approximate();

  const std::int64_t n_row = grid_.nodes(row_axis_);
  const std::int64_t rows = grid_.total_nodes() / n_row;
  std::vector<double> z(std::size_t(grid_.total_nodes()));
  fill_rows(seed, replicate, z, 1);

  // Mix across each remaining axis with its dense lower-triangular factor.
  // Row p corresponds to the multi-index over other_axes_ in their order.
  for (std::size_t f = 0; f < other_axes_.size(); ++f) {
    const int axis = other_axes_[f];
    const int n_a = grid_.nodes(axis);
    const std::vector<double>& L = mix_factors_[f];

    // stride (in rows) between consecutive indices of `axis`
    std::int64_t stride = 1;
    for (std::size_t g = f + 1; g < other_axes_.size(); ++g) stride *= grid_.nodes(other_axes_[g]);

    std::vector<double> col(n_a);
    const std::int64_t groups = rows / n_a;
    for (std::int64_t grp = 0; grp < groups; ++grp) {
      // base row of this group: decompose grp into (before, after) blocks
      std::int64_t before = grp / stride, after = grp % stride;
      std::int64_t base = before * (stride * n_a) + after;
      for (std::int64_t col_idx = 0; col_idx < n_row; ++col_idx) {
        for (int i = 0; i < n_a; ++i) col[i] = z[(base + i * stride) * n_row + col_idx];
        for (int i = n_a - 1; i >= 0; --i) {
          double acc = 0.0;
          const double* Li = &L[std::size_t(i) * n_a];
          for (int j = 0; j <= i; ++j) acc += Li[j] * col[j];
          z[(base + i * stride) * n_row + col_idx] = acc;
        }
      }
    }
  }

  // reorder into canonical axis-0-slowest layout
  out.values.resize(z.size());
  std::vector<int> n(grid_.dim);
  for (int a = 0; a < grid_.dim; ++a) n[a] = grid_.nodes(a);
  std::vector<int> ix(grid_.dim, 0);
  for (std::int64_t i = 0; i < std::int64_t(out.values.size()); ++i) {
    // position in the [other_axes..., row_axis] layout
    std::int64_t row = 0;
    for (std::size_t f = 0; f < other_axes_.size(); ++f) row = row * n[other_axes_[f]] + ix[other_axes_[f]];
    out.values[i] = z[row * n_row + ix[row_axis_]];
    for (int a = grid_.dim - 1; a >= 0; --a) {
      if (++ix[a] < n[a]) break;
      ix[a] = 0;
    }
  }
  return out;
}

std::int64_t FgnKroneckerSampler::excursion_count(std::uint64_t seed, std::uint32_t replicate,
                                                  double level, int threads) const {
  if (other_axes_.size() > 1) {
    // generic path: materialize (small grids only)
    FieldSample s = sample_field(seed, replicate);
    std::int64_t count = 0;
    for (double v : s.values) count += (v >= level);
    return count;
  }

  const std::int64_t n_row = grid_.nodes(row_axis_);
  std::vector<double> z(std::size_t(grid_.total_nodes()));
  fill_rows(seed, replicate, z, threads);

  if (other_axes_.empty()) {
    std::int64_t count = 0;
    for (double v : z) count += (v >= level);
    return count;
  }

  // d == 2 fused path: Y = L * Z column blocks, count on the fly.
  const int n_a = grid_.nodes(other_axes_[0]);
  const std::vector<double>& Lflat = mix_factors_[0];
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Z(
      z.data(), n_a, n_row);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> L(
      Lflat.data(), n_a, n_a);

  const std::int64_t block = 8192;
  const std::int64_t n_blocks = (n_row + block - 1) / block;
  std::vector<std::int64_t> counts(n_blocks, 0);

  auto work = [&](std::int64_t blk_begin, std::int64_t blk_end) {
    Eigen::MatrixXd y;
    for (std::int64_t b = blk_begin; b < blk_end; ++b) {
      std::int64_t c0 = b * block;
      std::int64_t bs = std::min(block, n_row - c0);
      y.noalias() = L.triangularView<Eigen::Lower>() * Z.middleCols(c0, bs);
      std::int64_t cnt = 0;
      const double* p = y.data();
      for (std::int64_t i = 0; i < std::int64_t(n_a) * bs; ++i) cnt += (p[i] >= level);
      counts[b] = cnt;
    }
  };

  if (threads <= 1 || n_blocks < 2) {
    work(0, n_blocks);
  } else {
    std::vector<std::thread> pool;
    std::int64_t chunk = (n_blocks + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      std::int64_t b0 = t * chunk, b1 = std::min(n_blocks, b0 + chunk);
      if (b0 >= b1) break;
      pool.emplace_back(work, b0, b1);
    }
    for (auto& th : pool) th.join();
  }

  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  return total;
}

void write_field_dump(const FieldSample& sample, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field_dump: cannot open " + path);
  const char magic[4] = {'L', 'R', 'D', 'F'};
  std::uint16_t version = 1, dim = std::uint16_t(sample.grid.dim);
  std::uint32_t n[3] = {0, 0, 0};
  double mesh[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < sample.grid.dim; ++a) {
    n[a] = std::uint32_t(sample.grid.nodes(a));
    mesh[a] = sample.grid.mesh[a];
  }
  out.write(magic, 4);
  out.write(reinterpret_cast<const char*>(&version), 2);
  out.write(reinterpret_cast<const char*>(&dim), 2);
  out.write(reinterpret_cast<const char*>(n), 12);
  out.write(reinterpret_cast<const char*>(mesh), 24);
  out.write(reinterpret_cast<const char*>(sample.values.data()),
            std::streamsize(sample.values.size() * sizeof(double)));
}

FieldSample read_field_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field_dump: cannot open " + path);
  char magic[4];
  std::uint16_t version = 0, dim = 0;
  std::uint32_t n[3];
  double mesh[3];
  in.read(magic, 4);
  if (std::memcmp(magic, "LRDF", 4) != 0) throw std::runtime_error("read_field_dump: bad magic");
  in.read(reinterpret_cast<char*>(&version), 2);
  in.read(reinterpret_cast<char*>(&dim), 2);
  in.read(reinterpret_cast<char*>(n), 12);
  in.read(reinterpret_cast<char*>(mesh), 24);
  FieldSample s;
  s.grid.dim = dim;
  for (int a = 0; a < dim; ++a) {
    s.grid.mesh[a] = mesh[a];
    s.grid.extent[a] = mesh[a] * n[a];
  }
  std::int64_t total = 1;
  for (int a = 0; a < dim; ++a) total *= n[a];
  s.values.resize(std::size_t(total));
  in.read(reinterpret_cast<char*>(s.values.data()), std::streamsize(s.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_field_dump: truncated file");
  return s;
}

}  // namespace lrdfield
