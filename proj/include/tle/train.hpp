#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tle/dataset.hpp"
#include "tle/model.hpp"
#include "tle/rng.hpp"

namespace tle {

enum class SampleMode { Train, Test };

// Splits [0, n) into K contiguous parts as equal as possible (remainder to
// the first parts). Train mode draws one uniform index per part; test mode
// takes the central index floor((start+end)/2) of each part.
inline std::vector<std::size_t> segment_indices(std::size_t n, std::size_t k,
                                                SampleMode mode,
                                                SplitMix64* rng = nullptr) {
  if (n < k)
    throw std::invalid_argument("segment_indices: fewer maps than segments");
  std::vector<std::size_t> out;
  out.reserve(k);
  const std::size_t base = n / k, rem = n % k;
  std::size_t start = 0;
  for (std::size_t p = 0; p < k; ++p) {
    const std::size_t len = base + (p < rem ? 1 : 0);
    const std::size_t end = start + len - 1;  // inclusive
    if (mode == SampleMode::Test || rng == nullptr)
      out.push_back((start + end) / 2);
    else
      out.push_back(start + static_cast<std::size_t>(rng->below(len)));
    start = end + 1;
  }
  return out;
}

inline SegmentSet sample_segments(const VideoRecord& v, std::size_t k,
                                  SampleMode mode, SplitMix64* rng = nullptr) {
  auto idx = segment_indices(v.maps.size(), k, mode, rng);
  std::vector<FeatureMap> segs;
  segs.reserve(k);
  for (std::size_t i : idx) segs.push_back(v.maps[i]);
  return SegmentSet(std::move(segs));
}

// buffer <- momentum*buffer + grad + wd*param; param <- param - lr*buffer
inline void sgd_update(std::vector<double>& param, std::vector<double>& buffer,
                       const std::vector<double>& grad, double lr,
                       double momentum, double weight_decay) {
  if (param.size() != grad.size() || param.size() != buffer.size())
    throw std::invalid_argument("sgd_update: shape mismatch");
  for (std::size_t i = 0; i < param.size(); ++i) {
    buffer[i] = momentum * buffer[i] + grad[i] + weight_decay * param[i];
    param[i] -= lr * buffer[i];
  }
}

inline PipelineResult forward_video(const TleModel& model, const SegmentSet& s,
                                    std::size_t label) {
  return model.forward(s, label);
}

// Averaged logits over `groups` segment sets. Group 0 uses the
// deterministic test-time centers; further groups draw random per-part
// indices from a stream derived from (model seed, video id), so evaluation
// stays reproducible. Ties at arg-max go to the lowest class index.
struct Prediction {
  std::size_t cls = 0;
  EncodedVector scores;
};

inline std::uint64_t hash_id(const std::string& id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : id) h = (h ^ static_cast<unsigned char>(ch)) * 0x100000001b3ULL;
  return h;
}

inline Prediction predict_video(const TleModel& model, const VideoRecord& v,
                                std::size_t groups) {
  if (groups == 0) throw std::invalid_argument("predict_video: zero groups");
  if (v.maps.size() < model.cfg.k)
    throw std::invalid_argument("predict_video: insufficient maps");
  EncodedVector sum;
  SplitMix64 rng(mix_seed(model.cfg.seed, hash_id(v.id)));
  for (std::size_t g = 0; g < groups; ++g) {
    SegmentSet s = g == 0 ? sample_segments(v, model.cfg.k, SampleMode::Test)
                          : sample_segments(v, model.cfg.k, SampleMode::Train,
                                            &rng);
    auto r = model.forward(s, 0);
    if (sum.empty())
      sum = r.logits;
    else
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += r.logits[i];
  }
  Prediction p;
  p.scores.resize(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i)
    p.scores[i] = sum[i] / static_cast<double>(groups);
  p.cls = static_cast<std::size_t>(
      std::max_element(p.scores.begin(), p.scores.end()) - p.scores.begin());
  return p;
}

// Late fusion: element-wise weighted mean of two pre-softmax score vectors.
inline EncodedVector fuse_streams(const EncodedVector& spatial,
                                  const EncodedVector& temporal,
                                  double w_spatial = 0.5,
                                  double w_temporal = 0.5) {
  if (spatial.size() != temporal.size())
    throw std::invalid_argument("fuse_streams: length mismatch");
  EncodedVector out(spatial.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = w_spatial * spatial[i] + w_temporal * temporal[i];
  return out;
}

struct EvalResult {
  double accuracy = 0.0;
  std::vector<std::size_t> per_class_correct;
  std::vector<std::size_t> per_class_total;
  std::vector<Prediction> predictions;
};

inline EvalResult evaluate(const TleModel& model, const FeatureDataset& ds,
                           std::size_t groups) {
  if (model.classes != ds.classes)
    throw std::invalid_argument("evaluate: model classes " +
                                std::to_string(model.classes) +
                                " != dataset classes " +
                                std::to_string(ds.classes));
  EvalResult r;
  r.per_class_correct.assign(ds.classes, 0);
  r.per_class_total.assign(ds.classes, 0);
  std::size_t correct = 0;
  for (const auto& v : ds.videos) {
    auto p = predict_video(model, v, groups);
    if (p.cls == v.label) {
      ++correct;
      ++r.per_class_correct[v.label];
    }
    ++r.per_class_total[v.label];
    r.predictions.push_back(std::move(p));
  }
  r.accuracy = static_cast<double>(correct) /
               static_cast<double>(ds.videos.size());
  return r;
}

namespace detail {

struct BatchGrads {
  std::vector<double> head_dw, head_db, fc_dw, fc_db;
  double loss = 0.0;

  explicit BatchGrads(const TleModel& m)
      : head_dw(m.head.weight.size(), 0.0),
        head_db(m.head.bias.size(), 0.0),
        fc_dw(m.fc ? m.fc->weight.size() : 0, 0.0),
        fc_db(m.fc ? m.fc->bias.size() : 0, 0.0) {}

  void add(const PipelineGrads& g, double loss_val) {
    for (std::size_t i = 0; i < head_dw.size(); ++i) head_dw[i] += g.head_dw[i];
    for (std::size_t i = 0; i < head_db.size(); ++i) head_db[i] += g.head_db[i];
    for (std::size_t i = 0; i < fc_dw.size(); ++i) fc_dw[i] += g.fc_dw[i];
    for (std::size_t i = 0; i < fc_db.size(); ++i) fc_db[i] += g.fc_db[i];
    loss += loss_val;
  }

  void scale(double f) {
    for (auto& v : head_dw) v *= f;
    for (auto& v : head_db) v *= f;
    for (auto& v : fc_dw) v *= f;
    for (auto& v : fc_db) v *= f;
    loss *= f;
  }
};

}  // namespace detail

// Advances the model to cfg.max_iters (or `until_iter` when nonzero).
// All stochastic choices are pure functions of (seed, iteration), so a
// save/resume at any iteration boundary reproduces a straight-through run
// bit for bit. Batch gradient is the mean over batch items. The two-step
// schedule: before phase1_iters only the head updates; afterwards the fc
// encoder (when present) updates too.
inline void train_model(TleModel& model, const FeatureDataset& ds,
                        std::ostream* log = nullptr,
                        std::size_t until_iter = 0) {
  ds.validate();
  if (model.classes != ds.classes)
    throw std::invalid_argument("train_model: class count mismatch");
  const TrainConfig& cfg = model.cfg;
  const std::size_t n = ds.videos.size();
  const std::size_t iters_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t stop = until_iter == 0 ? cfg.max_iters : until_iter;

  std::vector<std::size_t> order(n);
  std::size_t cached_epoch = static_cast<std::size_t>(-1);

  for (std::uint64_t t = model.iters_done; t < stop; ++t) {
    const std::size_t epoch = t / iters_per_epoch;
    const std::size_t pos = t % iters_per_epoch;
    if (epoch != cached_epoch) {
      std::iota(order.begin(), order.end(), 0);
      SplitMix64 erng(mix_seed(cfg.seed, 0x0E90C4ULL + epoch));
      for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[erng.below(i)]);
      cached_epoch = epoch;
    }
    const std::size_t lo = pos * cfg.batch_size;
    const std::size_t hi = std::min(lo + cfg.batch_size, n);

    detail::BatchGrads batch(model);
    for (std::size_t j = lo; j < hi; ++j) {
      const VideoRecord& v = ds.videos[order[j]];
      SplitMix64 srng(mix_seed(cfg.seed, t, j - lo));
      SegmentSet s = sample_segments(v, cfg.k, SampleMode::Train, &srng);
      auto fwd = model.forward(s, v.label);
      auto g = model.backward(s, v.label, fwd);
      batch.add(g, fwd.loss);
    }
    batch.scale(1.0 / static_cast<double>(hi - lo));

    const double lr = cfg.lr_at(t);
    const bool phase2 = t >= cfg.phase1_iters;
    sgd_update(model.head.weight, model.head_w_buf, batch.head_dw, lr,
               cfg.momentum, cfg.weight_decay);
    sgd_update(model.head.bias, model.head_b_buf, batch.head_db, lr,
               cfg.momentum, 0.0);
    if (model.fc && phase2) {
      sgd_update(model.fc->weight, model.fc_w_buf, batch.fc_dw, lr,
                 cfg.momentum, cfg.weight_decay);
      sgd_update(model.fc->bias, model.fc_b_buf, batch.fc_db, lr, cfg.momentum,
                 0.0);
    }
    model.iters_done = t + 1;
    if (log)
      (*log) << t << ',' << (phase2 ? 2 : 1) << ',' << batch.loss << ',' << lr
             << '\n';
    if (log && pos == iters_per_epoch - 1) {
      auto ev = evaluate(model, ds, 1);
      (*log) << epoch << ",train," << ev.accuracy << '\n';
    }
  }
}

inline TleModel train(const FeatureDataset& ds, const TrainConfig& cfg,
                      std::ostream* log = nullptr) {
  ds.validate();
  const auto& m0 = ds.videos.front().maps.front();
  TleModel model = TleModel::init(cfg, m0.height(), m0.width(), m0.channels(),
                                  ds.classes);
  train_model(model, ds, log);
  return model;
}

}  // namespace tle
