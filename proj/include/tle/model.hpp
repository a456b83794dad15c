#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tle/aggregate.hpp"
#include "tle/bilinear.hpp"
#include "tle/classify.hpp"
#include "tle/rng.hpp"
#include "tle/sketch.hpp"
#include "tle/tensor.hpp"

namespace tle {

enum class EncoderKind { Bilinear, TensorSketch, Fc };

inline const char* to_string(EncoderKind k) {
  switch (k) {
    case EncoderKind::Bilinear: return "bilinear";
    case EncoderKind::TensorSketch: return "tensor_sketch";
    case EncoderKind::Fc: return "fc";
  }
  return "?";
}

inline EncoderKind encoder_from_string(const std::string& s) {
  if (s == "bilinear") return EncoderKind::Bilinear;
  if (s == "tensor_sketch" || s == "sketch") return EncoderKind::TensorSketch;
  if (s == "fc") return EncoderKind::Fc;
  throw std::invalid_argument("unknown encoder kind: " + s);
}

struct TrainConfig {
  std::size_t k = 3;
  AggregationMode aggregation = AggregationMode::Product;
  EncoderKind encoder = EncoderKind::TensorSketch;
  std::size_t sketch_dim = 8196;
  std::size_t fc_dim = 64;
  double lr_init = 0.2;
  double lr_decay = 0.1;            // factor per decay interval
  std::size_t lr_decay_interval = 1000;  // iterations
  std::size_t max_iters = 2000;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  std::size_t batch_size = 10;
  std::uint64_t seed = 1;
  // iterations with only the classifier head trainable (fc encoder frozen);
  // with a sketch or exact bilinear encoder nothing else trains anyway
  std::size_t phase1_iters = 400;
  std::size_t test_groups = 5;

  void validate() const {
    if (k < 2) throw std::invalid_argument("config: k must be >= 2");
    if (lr_decay <= 0.0 || lr_decay > 1.0)
      throw std::invalid_argument("config: decay factor must be in (0,1]");
    if (batch_size == 0 || lr_decay_interval == 0 || max_iters == 0)
      throw std::invalid_argument("config: zero-valued field");
    if (lr_init < 0.0 || momentum < 0.0 || weight_decay < 0.0)
      throw std::invalid_argument("config: negative hyperparameter");
  }

  double lr_at(std::size_t iter) const {
    double lr = lr_init;
    for (std::size_t i = lr_decay_interval; i <= iter; i += lr_decay_interval)
      lr *= lr_decay;
    return lr;
  }
};

struct PipelineResult {
  double loss = 0.0;
  EncodedVector logits;
  // intermediates kept for the backward pass
  FeatureMap aggregated;
  EncodedVector encoded;      // y
  EncodedVector normalized;   // classifier input (z' or fc output)
};

struct PipelineGrads {
  std::vector<double> head_dw;
  std::vector<double> head_db;
  std::vector<double> fc_dw;  // empty unless fc encoder
  std::vector<double> fc_db;
  std::vector<FeatureMap> dsegments;  // empty unless requested
};

// Trainable state: one shared parameter set serves all K segments; the data
// model has no per-segment copies. Sketch tables are frozen at init.
struct TleModel {
  TrainConfig cfg;
  std::size_t feat_h = 0, feat_w = 0, feat_c = 0;
  std::size_t classes = 0;
  std::optional<TensorSketchEncoder> sketch;
  std::optional<FcEncoder> fc;
  ClassifierHead head;
  // SGD momentum buffers, shaped like the parameters
  std::vector<double> head_w_buf, head_b_buf;
  std::vector<double> fc_w_buf, fc_b_buf;
  std::uint64_t iters_done = 0;

  std::size_t encoded_dim() const {
    switch (cfg.encoder) {
      case EncoderKind::Bilinear: return feat_c * feat_c;
      case EncoderKind::TensorSketch: return cfg.sketch_dim;
      case EncoderKind::Fc: return cfg.fc_dim;
    }
    return 0;
  }

  static TleModel init(const TrainConfig& cfg, std::size_t h, std::size_t w,
                       std::size_t c, std::size_t classes) {
    cfg.validate();
    TleModel m;
    m.cfg = cfg;
    m.feat_h = h;
    m.feat_w = w;
    m.feat_c = c;
    m.classes = classes;
    if (cfg.encoder == EncoderKind::TensorSketch)
      m.sketch = TensorSketchEncoder::make(c, cfg.sketch_dim,
                                           mix_seed(cfg.seed, 0x5EEDULL));
    if (cfg.encoder == EncoderKind::Fc) {
      m.fc = FcEncoder::zeros(h * w * c, cfg.fc_dim);
      SplitMix64 rng(mix_seed(cfg.seed, 0xFCULL));
      const double scale = 1.0 / std::sqrt(static_cast<double>(h * w * c));
      for (auto& v : m.fc->weight) v = rng.uniform(-scale, scale);
      m.fc_w_buf.assign(m.fc->weight.size(), 0.0);
      m.fc_b_buf.assign(m.fc->bias.size(), 0.0);
    }
    m.head = ClassifierHead::zeros(m.encoded_dim(), classes);
    m.head_w_buf.assign(m.head.weight.size(), 0.0);
    m.head_b_buf.assign(m.head.bias.size(), 0.0);
    return m;
  }

  bool normalizes() const { return cfg.encoder != EncoderKind::Fc; }

  void check_shape(const SegmentSet& s) const {
    const auto& m0 = s.segment(0);
    if (m0.height() != feat_h || m0.width() != feat_w ||
        m0.channels() != feat_c)
      throw std::invalid_argument("TleModel: segment shape mismatch");
  }

  EncodedVector encode(const FeatureMap& x) const {
    switch (cfg.encoder) {
      case EncoderKind::Bilinear: return bilinear_forward(x);
      case EncoderKind::TensorSketch: return tensor_sketch_forward(x, *sketch);
      case EncoderKind::Fc: return fc_encode(x, *fc);
    }
    throw std::logic_error("unreachable");
  }

  // aggregate -> encode -> (signed sqrt + L2 unless fc) -> linear -> CE
  PipelineResult forward(const SegmentSet& s, std::size_t label) const {
    check_shape(s);
    FeatureMap x = aggregate_forward(s, cfg.aggregation);
    EncodedVector y = encode(x);
    EncodedVector z = normalizes() ? l2_normalize(signed_sqrt(y)) : y;
    EncodedVector logits = head.logits(z);
    auto sm = softmax_cross_entropy(logits, label);
    return PipelineResult{sm.loss, std::move(logits), std::move(x),
                          std::move(y), std::move(z)};
  }

  PipelineGrads backward(const SegmentSet& s, std::size_t label,
                         const PipelineResult& fwd,
                         bool want_input_grads = false) const {
    auto sm = softmax_cross_entropy(fwd.logits, label);
    auto hg = head_backward(head, fwd.normalized, sm.dlogits);
    PipelineGrads g;
    g.head_dw = std::move(hg.dweight);
    g.head_db = std::move(hg.dbias);

    const bool need_encoder_input =
        want_input_grads || cfg.encoder == EncoderKind::Fc;
    if (!need_encoder_input) return g;

    EncodedVector dy;
    if (normalizes()) {
      EncodedVector z_pre = signed_sqrt(fwd.encoded);
      EncodedVector dz = l2_normalize_backward(z_pre, hg.dz);
      dy = signed_sqrt_backward(fwd.encoded, dz);
    } else {
      dy = std::move(hg.dz);
    }

    if (cfg.encoder == EncoderKind::Fc) {
      auto fg = fc_backward(fwd.aggregated, *fc, dy);
      g.fc_dw = std::move(fg.dweight);
      g.fc_db = std::move(fg.dbias);
      if (want_input_grads)
        g.dsegments = aggregate_backward(s, cfg.aggregation, fg.dx);
      return g;
    }
    if (want_input_grads) {
      FeatureMap dx = cfg.encoder == EncoderKind::Bilinear
                          ? bilinear_backward(fwd.aggregated, dy)
                          : tensor_sketch_backward(fwd.aggregated, *sketch, dy);
      g.dsegments = aggregate_backward(s, cfg.aggregation, dx);
    }
    return g;
  }
};

}  // namespace tle
