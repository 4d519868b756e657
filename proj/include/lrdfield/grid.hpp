#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lrdfield {

// Rectangular observation window realized as its mesh lattice. Node counts
// are N_l = floor(extent_l / mesh_l); nodes sit at origin_l + i*mesh_l.
struct GridSpec {
  int dim = 1;
  std::array<double, 3> extent{1.0, 1.0, 1.0};
  std::array<double, 3> mesh{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  static GridSpec line(double r, double h = 1.0);
  static GridSpec box2(double r1, double r2, double h1 = 1.0, double h2 = 1.0);
  static GridSpec box3(double r1, double r2, double r3, double h = 1.0);

  int nodes(int axis) const;
  std::int64_t total_nodes() const;
  double cell_volume() const;
  double window_volume() const;  // total_nodes * cell_volume

  // Upper bound on total nodes; resource errors past this.
  static constexpr std::int64_t kMaxNodes = std::int64_t(1) << 28;

  void validate() const;
};

struct FieldSample {
  GridSpec grid;
  std::vector<double> values;  // axis-0 slowest, last axis contiguous
  std::uint64_t seed = 0;
  std::uint32_t replicate = 0;
  std::string model_tag;
  bool approximate = false;    // circulant spectrum was clipped
  std::int64_t saturation_count = 0;  // overflow clamps during subordination
};

// Flat binary dump: header fields magic "LRDF", version u16, dim u16,
// N1..N3 u32, mesh as 3 f64 (44 bytes), then values as little-endian f64.
// A JSON sidecar with the metadata goes next to it.
void write_field_dump(const FieldSample& sample, const std::string& path);
FieldSample read_field_dump(const std::string& path);

}  // namespace lrdfield
