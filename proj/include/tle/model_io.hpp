#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tle/model.hpp"

namespace tle {

struct ModelIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

constexpr char kModelMagic[4] = {'T', 'L', 'E', 'M'};
constexpr std::uint16_t kModelVersion = 1;

template <typename T>
void mput(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T mget(std::istream& in, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (static_cast<std::size_t>(in.gcount()) != sizeof(T))
    throw ModelIoError(std::string("model file truncated at ") + what);
  return v;
}

inline void put_vec(std::ostream& out, const std::vector<double>& v) {
  mput<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

inline std::vector<double> get_vec(std::istream& in, const char* what) {
  const auto n = mget<std::uint64_t>(in, what);
  std::vector<double> v(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double))
    throw ModelIoError(std::string("model file truncated in ") + what);
  return v;
}

}  // namespace detail

// Model file: config snapshot, dims, parameters and momentum buffers at
// 64-bit, sketch encoders as (c, d, seed) only — tables regenerate on load,
// so a loaded model reproduces predictions bit for bit.
inline void save_model(const TleModel& m, std::ostream& out) {
  using namespace detail;
  out.write(kModelMagic, 4);
  mput<std::uint16_t>(out, kModelVersion);
  const TrainConfig& c = m.cfg;
  mput<std::uint64_t>(out, c.k);
  mput<std::uint8_t>(out, static_cast<std::uint8_t>(c.aggregation));
  mput<std::uint8_t>(out, static_cast<std::uint8_t>(c.encoder));
  mput<std::uint64_t>(out, c.sketch_dim);
  mput<std::uint64_t>(out, c.fc_dim);
  mput<double>(out, c.lr_init);
  mput<double>(out, c.lr_decay);
  mput<std::uint64_t>(out, c.lr_decay_interval);
  mput<std::uint64_t>(out, c.max_iters);
  mput<double>(out, c.momentum);
  mput<double>(out, c.weight_decay);
  mput<std::uint64_t>(out, c.batch_size);
  mput<std::uint64_t>(out, c.seed);
  mput<std::uint64_t>(out, c.phase1_iters);
  mput<std::uint64_t>(out, c.test_groups);
  mput<std::uint64_t>(out, m.feat_h);
  mput<std::uint64_t>(out, m.feat_w);
  mput<std::uint64_t>(out, m.feat_c);
  mput<std::uint64_t>(out, m.classes);
  mput<std::uint64_t>(out, m.iters_done);
  if (m.sketch) mput<std::uint64_t>(out, m.sketch->base_seed);
  if (m.fc) {
    put_vec(out, m.fc->weight);
    put_vec(out, m.fc->bias);
    put_vec(out, m.fc_w_buf);
    put_vec(out, m.fc_b_buf);
  }
  put_vec(out, m.head.weight);
  put_vec(out, m.head.bias);
  put_vec(out, m.head_w_buf);
  put_vec(out, m.head_b_buf);
  if (!out) throw ModelIoError("model write failed");
}

inline void save_model(const TleModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelIoError("cannot open " + path);
  save_model(m, out);
}

inline TleModel load_model(std::istream& in) {
  using namespace detail;
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kModelMagic, 4) != 0)
    throw ModelIoError("bad model magic");
  const auto version = mget<std::uint16_t>(in, "version");
  if (version != kModelVersion)
    throw ModelIoError("unsupported model version " + std::to_string(version));
  TrainConfig c;
  c.k = mget<std::uint64_t>(in, "k");
  c.aggregation = static_cast<AggregationMode>(mget<std::uint8_t>(in, "agg"));
  c.encoder = static_cast<EncoderKind>(mget<std::uint8_t>(in, "encoder"));
  c.sketch_dim = mget<std::uint64_t>(in, "sketch_dim");
  c.fc_dim = mget<std::uint64_t>(in, "fc_dim");
  c.lr_init = mget<double>(in, "lr_init");
  c.lr_decay = mget<double>(in, "lr_decay");
  c.lr_decay_interval = mget<std::uint64_t>(in, "lr_decay_interval");
  c.max_iters = mget<std::uint64_t>(in, "max_iters");
  c.momentum = mget<double>(in, "momentum");
  c.weight_decay = mget<double>(in, "weight_decay");
  c.batch_size = mget<std::uint64_t>(in, "batch_size");
  c.seed = mget<std::uint64_t>(in, "seed");
  c.phase1_iters = mget<std::uint64_t>(in, "phase1_iters");
  c.test_groups = mget<std::uint64_t>(in, "test_groups");

  TleModel m;
  m.cfg = c;
  m.feat_h = mget<std::uint64_t>(in, "feat_h");
  m.feat_w = mget<std::uint64_t>(in, "feat_w");
  m.feat_c = mget<std::uint64_t>(in, "feat_c");
  m.classes = mget<std::uint64_t>(in, "classes");
  m.iters_done = mget<std::uint64_t>(in, "iters_done");
  if (c.encoder == EncoderKind::TensorSketch) {
    const auto base = mget<std::uint64_t>(in, "sketch seed");
    m.sketch = TensorSketchEncoder::make(m.feat_c, c.sketch_dim, base);
  }
  if (c.encoder == EncoderKind::Fc) {
    m.fc = FcEncoder::zeros(m.feat_h * m.feat_w * m.feat_c, c.fc_dim);
    m.fc->weight = get_vec(in, "fc weight");
    m.fc->bias = get_vec(in, "fc bias");
    m.fc_w_buf = get_vec(in, "fc weight buffer");
    m.fc_b_buf = get_vec(in, "fc bias buffer");
    if (m.fc->weight.size() != m.fc->in_dim * m.fc->out_dim ||
        m.fc->bias.size() != m.fc->out_dim)
      throw ModelIoError("fc parameter dimension mismatch");
  }
  m.head = ClassifierHead::zeros(m.encoded_dim(), m.classes);
  m.head.weight = get_vec(in, "head weight");
  m.head.bias = get_vec(in, "head bias");
  m.head_w_buf = get_vec(in, "head weight buffer");
  m.head_b_buf = get_vec(in, "head bias buffer");
  if (m.head.weight.size() != m.encoded_dim() * m.classes ||
      m.head.bias.size() != m.classes)
    throw ModelIoError("head parameter dimension mismatch");
  return m;
}

inline TleModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelIoError("cannot open " + path);
  return load_model(in);
}

}  // namespace tle
