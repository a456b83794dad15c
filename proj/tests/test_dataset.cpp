#include <cstdio>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "tle/dataset.hpp"

using namespace tle;

namespace {

FeatureDataset tiny_dataset() {
  FeatureDataset ds;
  ds.classes = 2;
  ds.class_names = {"class0", "class1"};
  VideoRecord a;
  a.id = "vid_a";
  a.label = 0;
  a.maps = {FeatureMap(1, 2, 2, {0.25, 0.5, 0.75, 1.0}),
            FeatureMap(1, 2, 2, {1.25, 1.5, 1.75, 2.0})};
  VideoRecord b;
  b.id = "vid_b";
  b.label = 1;
  b.stream = StreamTag::Temporal;
  b.maps = {FeatureMap(2, 1, 3, {1, 2, 3, 4, 5, 6})};
  ds.videos = {a, b};
  return ds;
}

}  // namespace

TEST_CASE("dataset round-trips through TLEF") {
  auto ds = tiny_dataset();
  std::stringstream buf;
  write_dataset(ds, buf);
  auto back = read_dataset(buf);
  CHECK(back.classes == ds.classes);
  REQUIRE(back.videos.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.videos[i].id == ds.videos[i].id);
    CHECK(back.videos[i].label == ds.videos[i].label);
    CHECK(back.videos[i].stream == ds.videos[i].stream);
    REQUIRE(back.videos[i].maps.size() == ds.videos[i].maps.size());
    for (std::size_t m = 0; m < back.videos[i].maps.size(); ++m)
      CHECK(back.videos[i].maps[m].values() == ds.videos[i].maps[m].values());
  }
}

TEST_CASE("reader rejects bad magic") {
  std::stringstream buf;
  buf << "XXXX" << std::string(16, '\0');
  try {
    read_dataset(buf);
    FAIL("expected magic error");
  } catch (const DatasetIoError& e) {
    CHECK(e.kind == DatasetIoError::Kind::Magic);
  }
}

TEST_CASE("reader reports truncation with byte offset") {
  std::stringstream buf;
  write_dataset(tiny_dataset(), buf);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() - 7);  // cut into the value section
  std::stringstream cut(bytes);
  try {
    read_dataset(cut);
    FAIL("expected truncation error");
  } catch (const DatasetIoError& e) {
    CHECK(e.kind == DatasetIoError::Kind::Truncation);
    CHECK(e.offset > 0);
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
}

TEST_CASE("reader rejects implausible shapes") {
  std::stringstream buf;
  write_dataset(tiny_dataset(), buf);
  std::string bytes = buf.str();
  // first video's h field sits after magic(4)+ver(2)+C(4)+count(4)+
  // idlen(4)+id(5)+label(4)+stream(1)+mapcount(4)
  const std::size_t h_off = 4 + 2 + 4 + 4 + 4 + 5 + 4 + 1 + 4;
  bytes[h_off] = '\xff';
  bytes[h_off + 1] = '\xff';
  bytes[h_off + 2] = '\xff';
  bytes[h_off + 3] = '\x7f';
  std::stringstream bad(bytes);
  try {
    read_dataset(bad);
    FAIL("expected shape error");
  } catch (const DatasetIoError& e) {
    CHECK(e.kind == DatasetIoError::Kind::Shape);
  }
}

TEST_CASE("fuzz: generator output always round-trips") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    SynthConfig cfg;
    cfg.classes = 2 + static_cast<std::uint32_t>(rng.below(4));
    cfg.videos_per_class = 1 + rng.below(3);
    cfg.frames_per_video = 3 + rng.below(4);
    cfg.h = 1 + rng.below(3);
    cfg.w = 1 + rng.below(3);
    cfg.c = 1 + rng.below(4);
    cfg.difficulty = rng.uniform(0.0, 0.5);
    cfg.seed = rng.next();
    auto ds = synth_dataset(cfg);
    std::stringstream buf;
    write_dataset(ds, buf);
    auto back = read_dataset(buf);
    REQUIRE(back.videos.size() == ds.videos.size());
    for (std::size_t i = 0; i < ds.videos.size(); ++i)
      for (std::size_t m = 0; m < ds.videos[i].maps.size(); ++m)
        CHECK(back.videos[i].maps[m].values() ==
              ds.videos[i].maps[m].values());
  }
}

TEST_CASE("synth dataset determinism and noiseless case") {
  SynthConfig cfg;
  cfg.difficulty = 0.0;
  auto a = synth_dataset(cfg);
  auto b = synth_dataset(cfg);
  REQUIRE(a.videos.size() == b.videos.size());
  for (std::size_t i = 0; i < a.videos.size(); ++i)
    for (std::size_t m = 0; m < a.videos[i].maps.size(); ++m)
      CHECK(a.videos[i].maps[m].values() == b.videos[i].maps[m].values());

  // difficulty 0: all frames of all videos of a class equal the template
  for (const auto& v : a.videos)
    for (const auto& m : v.maps)
      CHECK(m.values() == a.videos[v.label * cfg.videos_per_class]
                              .maps.front()
                              .values());
}

TEST_CASE("synth dataset rejects degenerate sizes") {
  SynthConfig cfg;
  cfg.classes = 1;
  CHECK_THROWS_AS(synth_dataset(cfg), std::invalid_argument);
  SynthConfig cfg2;
  cfg2.frames_per_video = 0;
  CHECK_THROWS_AS(synth_dataset(cfg2), std::invalid_argument);
}

TEST_CASE("train and test splits share class templates") {
  SynthConfig tr;
  tr.difficulty = 0.0;
  SynthConfig te = tr;
  te.split = SplitTag::Test;
  auto a = synth_dataset(tr);
  auto b = synth_dataset(te);
  // at difficulty 0 both splits collapse to the per-class template
  CHECK(a.videos.front().maps.front().values() ==
        b.videos.front().maps.front().values());
  CHECK(a.videos.front().id != b.videos.front().id);
}
