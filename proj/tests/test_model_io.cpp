#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "tle/model_io.hpp"
#include "tle/train.hpp"

using namespace tle;

namespace {

FeatureDataset small_dataset() {
  SynthConfig cfg;
  cfg.classes = 3;
  cfg.videos_per_class = 4;
  cfg.frames_per_video = 6;
  cfg.h = cfg.w = 2;
  cfg.c = 4;
  return synth_dataset(cfg);
}

}  // namespace

TEST_CASE("model round-trip reproduces predictions exactly") {
  auto ds = small_dataset();
  TrainConfig cfg;
  cfg.sketch_dim = 16;
  cfg.max_iters = 50;
  cfg.batch_size = 4;
  auto model = train(ds, cfg);

  std::stringstream buf;
  save_model(model, buf);
  auto back = load_model(buf);

  CHECK(back.head.weight == model.head.weight);
  CHECK(back.head_w_buf == model.head_w_buf);
  CHECK(back.iters_done == model.iters_done);
  for (const auto& v : ds.videos) {
    auto p1 = predict_video(model, v, 3);
    auto p2 = predict_video(back, v, 3);
    CHECK(p1.scores == p2.scores);
    CHECK(p1.cls == p2.cls);
  }
}

TEST_CASE("fc model round-trips its encoder parameters") {
  auto ds = small_dataset();
  TrainConfig cfg;
  cfg.encoder = EncoderKind::Fc;
  cfg.fc_dim = 8;
  cfg.max_iters = 30;
  cfg.phase1_iters = 10;
  cfg.batch_size = 4;
  auto model = train(ds, cfg);
  std::stringstream buf;
  save_model(model, buf);
  auto back = load_model(buf);
  REQUIRE(back.fc.has_value());
  CHECK(back.fc->weight == model.fc->weight);
  CHECK(back.fc_w_buf == model.fc_w_buf);
}

TEST_CASE("load rejects corrupt input") {
  std::stringstream bad("not a model");
  CHECK_THROWS_AS(load_model(bad), ModelIoError);

  auto ds = small_dataset();
  TrainConfig cfg;
  cfg.sketch_dim = 8;
  cfg.max_iters = 5;
  auto model = train(ds, cfg);
  std::stringstream buf;
  save_model(model, buf);
  std::string bytes = buf.str();
  bytes.resize(bytes.size() / 2);
  std::stringstream cut(bytes);
  CHECK_THROWS_AS(load_model(cut), ModelIoError);
}

TEST_CASE("wrong class count is rejected at evaluation") {
  auto ds = small_dataset();
  TrainConfig cfg;
  cfg.sketch_dim = 8;
  cfg.max_iters = 5;
  auto model = train(ds, cfg);
  SynthConfig other;
  other.classes = 5;
  other.videos_per_class = 2;
  other.frames_per_video = 6;
  other.h = other.w = 2;
  other.c = 4;
  auto ds5 = synth_dataset(other);
  CHECK_THROWS_AS(evaluate(model, ds5, 1), std::invalid_argument);
}

TEST_CASE("save/resume equals straight-through training") {
  auto ds = small_dataset();
  TrainConfig cfg;
  cfg.sketch_dim = 16;
  cfg.max_iters = 200;
  cfg.batch_size = 4;

  auto straight = train(ds, cfg);

  const auto& m0 = ds.videos.front().maps.front();
  TleModel part = TleModel::init(cfg, m0.height(), m0.width(), m0.channels(),
                                 ds.classes);
  train_model(part, ds, nullptr, 100);
  std::stringstream buf;
  save_model(part, buf);
  auto resumed = load_model(buf);
  train_model(resumed, ds, nullptr, 200);

  CHECK(resumed.head.weight == straight.head.weight);
  CHECK(resumed.head.bias == straight.head.bias);
  CHECK(resumed.head_w_buf == straight.head_w_buf);
}
