#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldnet/numeric.hpp"
#include "ldnet/rng.hpp"

using namespace ldnet;
using rng::Draw;

TEST_CASE("philox known-answer vectors") {
  // Frozen from an independent implementation of the 10-round algorithm;
  // the zero and pi-digit cases also match the reference distribution's
  // published vectors.
  auto b0 = rng::philox4x32(0, 0, 0, 0, 0, 0);
  CHECK(b0.x[0] == 0x6627e8d5u);
  CHECK(b0.x[1] == 0xe169c58du);
  CHECK(b0.x[2] == 0xbc57ac4cu);
  CHECK(b0.x[3] == 0x9b00dbd8u);

  auto bp = rng::philox4x32(0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u,
                            0xa4093822u, 0x299f31d0u);
  CHECK(bp.x[0] == 0xd16cfe09u);
  CHECK(bp.x[1] == 0x94fdccebu);
  CHECK(bp.x[2] == 0x5001e420u);
  CHECK(bp.x[3] == 0x24126ea1u);

  auto bf = rng::philox4x32(0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu,
                            0xffffffffu, 0xffffffffu);
  CHECK(bf.x[0] == 0x408f276du);
  CHECK(bf.x[1] == 0x41c83b0eu);
  CHECK(bf.x[2] == 0xa20bc7c6u);
  CHECK(bf.x[3] == 0x6d5451fdu);
}

TEST_CASE("stream draws are addressed, not sequenced") {
  rng::Stream s(42);
  double a = s.normal(Draw::step_noise, 3, 7, 1);
  double b = s.normal(Draw::step_noise, 0, 0, 0);  // unrelated draw in between
  double a2 = s.normal(Draw::step_noise, 3, 7, 1);
  CHECK(a == a2);
  CHECK(a != b);

  // distinct purposes and indices decorrelate
  CHECK(s.normal(Draw::theta, 3, 7, 1) != a);
  CHECK(s.normal(Draw::step_noise, 3, 7, 2) != a);
  CHECK(s.normal(Draw::step_noise, 4, 7, 1) != a);

  rng::Stream s2(43);
  CHECK(s2.normal(Draw::step_noise, 3, 7, 1) != a);
}

TEST_CASE("normal pair has the right first two moments") {
  rng::Stream s(2024);
  const int m = 100000;
  std::vector<double> xs, x2s;
  xs.reserve(2 * m);
  x2s.reserve(2 * m);
  for (int i = 0; i < m; ++i) {
    auto [a, b] = s.normal_pair(Draw::test_aux, uint32_t(i));
    xs.push_back(a);
    xs.push_back(b);
    x2s.push_back(a * a);
    x2s.push_back(b * b);
  }
  double mean = pairwise_sum(xs) / (2 * m);
  double second = pairwise_sum(x2s) / (2 * m);
  // SE(mean) = 1/sqrt(2m), SE(second) = sqrt(2)/sqrt(2m)
  double se_mean = 1.0 / std::sqrt(2.0 * m);
  double se_second = std::sqrt(2.0) / std::sqrt(2.0 * m);
  CHECK(std::abs(mean) < 4 * se_mean);
  CHECK(std::abs(second - 1.0) < 4 * se_second);

  // pair members are uncorrelated
  std::vector<double> prod(m);
  for (int i = 0; i < m; ++i) {
    auto [a, b] = s.normal_pair(Draw::test_aux, uint32_t(i));
    prod[size_t(i)] = a * b;
  }
  double cross = pairwise_sum(prod) / m;
  CHECK(std::abs(cross) < 4.0 / std::sqrt(double(m)));
}

TEST_CASE("pairwise and permutation-invariant sums") {
  // 2^20 copies of 0.1; the real-arithmetic sum is 104857.600000000005820766...
  // and a running float64 sum drifts by ~1.6e-6.
  std::vector<double> xs(std::size_t(1) << 20, 0.1);
  double cascade = pairwise_sum(xs);
  CHECK(std::abs(cascade - 104857.60000000000582) < 1e-9);
  double running = 0.0;
  for (double x : xs) running += x;
  CHECK(std::abs(cascade - 104857.60000000000582) <
        std::abs(running - 104857.60000000000582));
  CHECK(pairwise_sum(xs) == cascade);

  std::vector<double> a = {0.3, 0.1, -0.7, 0.2, 1e-9};
  std::vector<double> b = {1e-9, 0.2, 0.3, -0.7, 0.1};  // same multiset
  double sa = permutation_invariant_sum(a);
  double sb = permutation_invariant_sum(b);
  CHECK(sa == sb);
}

TEST_CASE("mod_window maps to the centered window") {
  CHECK(mod_window(0, 2) == 0);
  CHECK(mod_window(2, 2) == 2);
  CHECK(mod_window(3, 2) == -2);
  CHECK(mod_window(-3, 2) == 2);
  CHECK(mod_window(5, 2) == 0);
  CHECK(mod_window(-5, 2) == 0);
  CHECK(mod_window(7, 0) == 0);
}

TEST_CASE("parallel_for fills every slot once, any thread count") {
  const std::size_t m = 1000;
  std::vector<double> one(m, 0.0), four(m, 0.0);
  parallel_for(m, 1, [&](std::size_t i) { one[i] = std::sin(double(i)); });
  parallel_for(m, 4, [&](std::size_t i) { four[i] = std::sin(double(i)); });
  CHECK(one == four);
}
