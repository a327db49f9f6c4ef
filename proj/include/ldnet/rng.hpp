#pragma once

#include <cstdint>
#include <utility>

namespace ldnet::rng {

// Counter-based generator (Philox-4x32-10). Every draw is addressed by
// (seed; purpose, i0, i1, i2), so a value never depends on how many draws
// happened before it or on which thread asked for it.
struct Block {
  uint32_t x[4];
};

Block philox4x32(uint32_t c0, uint32_t c1, uint32_t c2, uint32_t c3,
                 uint32_t k0, uint32_t k1);

// Draw purposes. Keep codes stable: they are part of the reproducibility
// contract (same seed + same address = same value, forever).
enum class Draw : uint32_t {
  init_state = 1,       // u_0^j          (replicate, neuron-row)
  theta = 2,            // theta^j        (replicate, neuron-row)
  step_noise = 3,       // B_t^j          (replicate, neuron-row, t)
  weight_spectral = 4,  // field sampler  (replicate, grid cell)
  weight_dense = 5,     // dense oracle   (replicate, grid cell)
  gaussian_window = 6,  // test-measure window draws (replicate, coordinate)
  test_aux = 7,         // free slot for test fixtures
};

class Stream {
 public:
  explicit Stream(uint64_t seed) : seed_(seed) {}

  uint64_t seed() const { return seed_; }

  // One standard normal at the given address.
  double normal(Draw purpose, uint32_t i0, uint32_t i1 = 0, uint32_t i2 = 0) const;

  // Two independent standard normals from one address (Box-Muller pair).
  std::pair<double, double> normal_pair(Draw purpose, uint32_t i0,
                                        uint32_t i1 = 0, uint32_t i2 = 0) const;

 private:
  uint64_t seed_;
};

}  // namespace ldnet::rng
