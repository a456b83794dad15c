#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "test_util.hpp"
#include "tle/aggregate.hpp"
#include "tle/gradcheck.hpp"

using namespace tle;

namespace {

SegmentSet scalar_set(std::vector<double> vals) {
  std::vector<FeatureMap> segs;
  for (double v : vals) segs.emplace_back(1, 1, 1, std::vector<double>{v});
  return SegmentSet(std::move(segs));
}

}  // namespace

TEST_CASE("aggregate forward: direct arithmetic") {
  CHECK(aggregate_forward(scalar_set({2, 3, 4}), AggregationMode::Product)[0] ==
        24.0);

  SegmentSet s({FeatureMap(1, 1, 2, {1, 3}), FeatureMap(1, 1, 2, {3, 5})});
  auto avg = aggregate_forward(s, AggregationMode::Average);
  CHECK(avg[0] == 2.0);
  CHECK(avg[1] == 4.0);
}

TEST_CASE("product with all-ones partners is identity") {
  SplitMix64 rng(3);
  FeatureMap m = test::random_map(2, 2, 3, rng);
  FeatureMap ones(2, 2, 3, std::vector<double>(12, 1.0));
  SegmentSet s({ones, m, ones});
  auto x = aggregate_forward(s, AggregationMode::Product);
  CHECK(x.values() == m.values());
}

TEST_CASE("segment set validation") {
  CHECK_THROWS_AS(SegmentSet({FeatureMap(1, 1, 1, {1.0})}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SegmentSet({FeatureMap(1, 1, 1, {1.0}), FeatureMap(1, 1, 2, {1, 2})}),
      std::invalid_argument);
}

TEST_CASE("aggregate backward: hand values") {
  auto s = scalar_set({2, 3, 4});
  FeatureMap dx(1, 1, 1, {1.0});
  auto g = aggregate_backward(s, AggregationMode::Product, dx);
  CHECK(g[0][0] == 12.0);
  CHECK(g[1][0] == 8.0);
  CHECK(g[2][0] == 6.0);

  auto s2 = scalar_set({1, 2});
  FeatureMap dx6(1, 1, 1, {6.0});
  auto ga = aggregate_backward(s2, AggregationMode::Average, dx6);
  CHECK(ga[0][0] == 3.0);
  CHECK(ga[1][0] == 3.0);
}

TEST_CASE("max backward routes to lowest index on ties") {
  SegmentSet s({FeatureMap(1, 1, 1, {5.0}), FeatureMap(1, 1, 1, {5.0})});
  auto g = aggregate_backward(s, AggregationMode::Maximum,
                              FeatureMap(1, 1, 1, {2.0}));
  CHECK(g[0][0] == 2.0);
  CHECK(g[1][0] == 0.0);
}

TEST_CASE("product backward stays finite through zeros") {
  auto s = scalar_set({2, 0, 4});
  FeatureMap dx(1, 1, 1, {1.0});
  auto g = aggregate_backward(s, AggregationMode::Product, dx);
  CHECK(g[0][0] == 0.0);
  CHECK(g[1][0] == 8.0);  // S1*S3
  CHECK(g[2][0] == 0.0);
  // and matches finite differences on the forward
  auto f = [](const std::vector<double>& x) { return x[0] * x[1] * x[2]; };
  auto num = finite_diff(f, {2, 0, 4}, 1e-5);
  CHECK(std::abs(num[1] - 8.0) <= 1e-6 * 8.0);
}

TEST_CASE("backward matches finite differences for all modes") {
  SplitMix64 rng(101);
  for (auto mode : {AggregationMode::Average, AggregationMode::Maximum,
                    AggregationMode::Product}) {
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t k = 2 + rng.below(3);
      const std::size_t h = 1 + rng.below(3), w = 1 + rng.below(3),
                        c = 1 + rng.below(5);
      const std::size_t n = h * w * c;
      std::vector<FeatureMap> segs;
      for (std::size_t j = 0; j < k; ++j)
        segs.push_back(test::random_signed_map(h, w, c, rng));
      if (mode == AggregationMode::Maximum) {
        // enforce a unique per-element arg-max margin > 2h
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          std::vector<double> vals;
          for (auto& s : segs) vals.push_back(s[i]);
          std::sort(vals.begin(), vals.end());
          if (vals[k - 1] - vals[k - 2] < 4e-5) ok = false;
        }
        if (!ok) continue;
      }
      SegmentSet s(segs);
      FeatureMap dx = test::random_signed_map(h, w, c, rng);
      auto analytic = aggregate_backward(s, mode, dx);

      // loss = <dx, forward(segments)>; flat vector is all segments stacked
      std::vector<double> x0;
      for (auto& seg : segs) x0.insert(x0.end(), seg.values().begin(),
                                       seg.values().end());
      auto f = [&](const std::vector<double>& x) {
        std::vector<FeatureMap> ss;
        for (std::size_t j = 0; j < k; ++j)
          ss.emplace_back(h, w, c,
                          std::vector<double>(x.begin() + j * n,
                                              x.begin() + (j + 1) * n));
        auto out = aggregate_forward(SegmentSet(ss), mode);
        double loss = 0;
        for (std::size_t i = 0; i < n; ++i) loss += dx[i] * out[i];
        return loss;
      };
      auto numeric = finite_diff(f, x0, 1e-5);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
          CHECK(rel_error(analytic[j][i], numeric[j * n + i]) <= 1e-6);
    }
  }
}

TEST_CASE("forward permutation invariance") {
  SplitMix64 rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<FeatureMap> segs;
    for (int j = 0; j < 3; ++j) segs.push_back(test::random_map(2, 2, 3, rng));
    std::vector<FeatureMap> perm = {segs[2], segs[0], segs[1]};
    for (auto mode : {AggregationMode::Average, AggregationMode::Maximum,
                      AggregationMode::Product}) {
      auto a = aggregate_forward(SegmentSet(segs), mode);
      auto b = aggregate_forward(SegmentSet(perm), mode);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (mode == AggregationMode::Maximum)
          CHECK(a[i] == b[i]);
        else
          CHECK(rel_error(a[i], b[i]) <= 1e-12);
      }
    }
  }
}
