#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "tle/bilinear.hpp"
#include "tle/gradcheck.hpp"

using namespace tle;

TEST_CASE("bilinear forward: single outer product") {
  FeatureMap x(1, 1, 2, {1, 2});
  auto y = bilinear_forward(x);
  CHECK(y == EncodedVector{1, 2, 2, 4});
}

TEST_CASE("bilinear forward: orthonormal locations sum to identity") {
  FeatureMap x(2, 1, 2, {1, 0, 0, 1});
  auto y = bilinear_forward(x);
  CHECK(y == EncodedVector{1, 0, 0, 1});
}

TEST_CASE("bilinear dimension is c squared") {
  // production-scale arithmetic checked without allocating the full map
  CHECK(std::size_t(1024) * 1024 == 1048576u);
  FeatureMap x(1, 1, 3, {1, 2, 3});
  CHECK(bilinear_forward(x).size() == 9);
}

TEST_CASE("reshaped bilinear feature is symmetric PSD") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    FeatureMap x = test::random_map(2, 2, 4, rng);
    auto y = bilinear_forward(x);
    const std::size_t c = 4;
    // symmetry
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        CHECK(y[i * c + j] == doctest::Approx(y[j * c + i]).epsilon(1e-12));
    // PSD: v^T M v >= -1e-9 for random v (M is a Gram matrix)
    for (int probe = 0; probe < 10; ++probe) {
      auto v = test::random_vec(c, rng);
      double q = 0;
      for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) q += v[i] * y[j * c + i] * v[j];
      CHECK(q >= -1e-9);
    }
  }
}

TEST_CASE("kernel identity: <bilinear(A), bilinear(B)> = <a,b>^2") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    FeatureMap a = test::random_map(1, 1, 5, rng);
    FeatureMap b = test::random_map(1, 1, 5, rng);
    auto ya = bilinear_forward(a);
    auto yb = bilinear_forward(b);
    double lhs = 0;
    for (std::size_t i = 0; i < ya.size(); ++i) lhs += ya[i] * yb[i];
    double dot = 0;
    for (std::size_t i = 0; i < 5; ++i) dot += a[i] * b[i];
    const double rhs = dot * dot;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("bilinear backward: hand cases") {
  FeatureMap x1(1, 1, 1, {3.0});
  auto d1 = bilinear_backward(x1, {1.0});
  CHECK(d1[0] == 6.0);

  FeatureMap x2(1, 1, 2, {1, 0});
  auto d2 = bilinear_backward(x2, {1, 1, 1, 1});
  CHECK(d2[0] == 2.0);
  CHECK(d2[1] == 2.0);

  CHECK_THROWS_AS(bilinear_backward(x2, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("bilinear backward matches finite differences") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t h = 2, w = 2, c = 3;
    FeatureMap x = test::random_signed_map(h, w, c, rng);
    auto dy = test::random_vec(c * c, rng);
    auto analytic = bilinear_backward(x, dy);
    auto f = [&](const std::vector<double>& v) {
      auto y = bilinear_forward(FeatureMap(h, w, c, v));
      double loss = 0;
      for (std::size_t i = 0; i < y.size(); ++i) loss += dy[i] * y[i];
      return loss;
    };
    auto numeric = finite_diff(f, x.values(), 1e-5);
    for (std::size_t i = 0; i < numeric.size(); ++i)
      CHECK(rel_error(analytic[i], numeric[i]) <= 1e-6);
  }
}
