#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "test_util.hpp"
#include "tle/gradcheck.hpp"

using namespace tle;

TEST_CASE("finite_diff exact on quadratics up to roundoff") {
  auto f = [](const std::vector<double>& x) { return x[0] * x[0]; };
  auto g = finite_diff(f, {3.0}, 1e-5);
  CHECK(std::abs(g[0] - 6.0) <= 1e-9);
}

TEST_CASE("finite_diff of a constant is zero") {
  auto f = [](const std::vector<double>&) { return 42.0; };
  auto g = finite_diff(f, {1.0, 2.0, 3.0}, 1e-5);
  for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("finite_diff on a product matches leave-one-out values") {
  auto f = [](const std::vector<double>& x) { return x[0] * x[1] * x[2]; };
  auto g = finite_diff(f, {2, 3, 4}, 1e-5);
  CHECK(std::abs(g[0] - 12.0) <= 1e-6);
  CHECK(std::abs(g[1] - 8.0) <= 1e-6);
  CHECK(std::abs(g[2] - 6.0) <= 1e-6);
}

TEST_CASE("finite_diff reports the offending coordinate on non-finite f") {
  auto f = [](const std::vector<double>& x) {
    return x[1] > 1.0 ? std::numeric_limits<double>::quiet_NaN() : x[0];
  };
  CHECK_THROWS_WITH_AS(finite_diff(f, {0.0, 1.0}, 1e-5),
                       "finite_diff: non-finite f at coordinate 1",
                       std::runtime_error);
}

TEST_CASE("central difference error scales as h^2 on cubics") {
  // f(x) = x^3: error = h^2 * x (third derivative 6, /6)
  auto f = [](const std::vector<double>& x) { return x[0] * x[0] * x[0]; };
  for (double h : {1e-4, 1e-5}) {
    auto g = finite_diff(f, {2.0}, h);
    CHECK(std::abs(g[0] - 12.0) <= h * h * 2.0 + 1e-9);
  }
}

TEST_CASE("run_check passes a correct backward and catches a corrupted one") {
  auto make_good = [](std::uint64_t t) {
    SplitMix64 rng(mix_seed(900, t));
    CheckCase c;
    c.x = test::random_vec(3, rng, 0.3, 1.0);
    c.f = [](const std::vector<double>& x) { return x[0] * x[1] * x[2]; };
    c.analytic = {c.x[1] * c.x[2], c.x[0] * c.x[2], c.x[0] * c.x[1]};
    return c;
  };
  auto rep = run_check(make_good, 50, 1e-6);
  CHECK(rep.pass);

  // sign-flipped gradient must fail within 5 trials
  auto make_bad = [&](std::uint64_t t) {
    auto c = make_good(t);
    c.analytic[0] = -c.analytic[0];
    c.replay = {FeatureMap(1, 1, 3, c.x)};
    return c;
  };
  auto bad = run_check(make_bad, 50, 1e-6, kGradCheckStep,
                       "gradcheck_replay_test");
  CHECK(!bad.pass);
  CHECK(bad.worst_trial < 5);
  // the failing instance is serialized in the dataset format for replay
  CHECK(!bad.replay_path.empty());
  auto replay = read_dataset(bad.replay_path);
  CHECK(replay.videos.size() == 1);
  // the dataset format stores 32-bit values
  auto expected = make_bad(bad.worst_trial).x;
  for (auto& v : expected) v = static_cast<double>(static_cast<float>(v));
  CHECK(replay.videos[0].maps[0].values() == expected);
  std::remove(bad.replay_path.c_str());
}
