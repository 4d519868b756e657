#pragma once

#include <array>
#include <cstdint>

namespace lrdfield {

// Philox4x32-10 (Salmon et al., SC 2011). Counter-based: the stream is a
// pure function of (seed, stream id, position), so replicates and rows can
// be generated in any order on any number of threads with identical output.
class PhiloxStream {
 public:
  PhiloxStream(uint64_t seed, uint64_t stream);

  double uniform();       // (0,1)
  double normal();        // N(0,1), ziggurat
  void skip_blocks(uint64_t n);

  // Stream-id packing helpers: lane separates independent uses inside one
  // replicate (noise, volatility, oracle, ...), idx indexes rows/draws.
  static uint64_t stream_id(uint32_t replicate, uint32_t lane, uint32_t idx) {
    return (uint64_t(replicate) << 32) | (uint64_t(lane & 0xF) << 28) | (idx & 0x0FFFFFFF);
  }

 private:
  void next_block();
  uint32_t next_u32();

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> counter_;
  std::array<uint32_t, 4> block_{};
  int pos_ = 4;  // forces a block on first use
};

}  // namespace lrdfield
