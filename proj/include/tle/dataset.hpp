#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tle/rng.hpp"
#include "tle/tensor.hpp"

namespace tle {

enum class StreamTag : std::uint8_t { Spatial = 0, Temporal = 1 };
enum class SplitTag : std::uint8_t { Train = 0, Test = 1 };

struct VideoRecord {
  std::string id;
  std::uint32_t label = 0;
  StreamTag stream = StreamTag::Spatial;
  std::vector<FeatureMap> maps;  // ordered by frame/clip position
};

struct FeatureDataset {
  std::uint32_t classes = 0;
  std::vector<std::string> class_names;
  SplitTag split = SplitTag::Train;
  std::vector<VideoRecord> videos;

  void validate() const {
    if (videos.empty()) throw std::invalid_argument("dataset: empty");
    if (classes < 2) throw std::invalid_argument("dataset: need >= 2 classes");
    for (const auto& v : videos) {
      if (v.label >= classes)
        throw std::invalid_argument("dataset: label out of range for " + v.id);
      if (v.maps.empty())
        throw std::invalid_argument("dataset: video without maps: " + v.id);
      for (const auto& m : v.maps)
        if (!m.same_shape(v.maps.front()))
          throw std::invalid_argument("dataset: shape mismatch within " + v.id);
    }
  }
};

// Errors from the TLEF reader, with the byte offset where parsing failed.
struct DatasetIoError : std::runtime_error {
  enum class Kind { Magic, Version, Truncation, Shape, Io };
  Kind kind;
  std::size_t offset;
  DatasetIoError(Kind k, std::size_t off, const std::string& msg)
      : std::runtime_error(msg + " (byte offset " + std::to_string(off) + ")"),
        kind(k),
        offset(off) {}
};

namespace detail {

constexpr char kDatasetMagic[4] = {'T', 'L', 'E', 'F'};
constexpr std::uint16_t kDatasetVersion = 1;
// per-video value payload cap, catches corrupted headers before allocation
constexpr std::uint64_t kMaxMapElems = 1ull << 28;

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::size_t offset() const { return off_; }

  void bytes(void* dst, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw DatasetIoError(DatasetIoError::Kind::Truncation, off_,
                           std::string("truncated while reading ") + what);
    off_ += n;
  }

  template <typename T>
  T scalar(const char* what) {
    T v;
    bytes(&v, sizeof(T), what);
    return v;
  }

 private:
  std::istream& in_;
  std::size_t off_ = 0;
};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

}  // namespace detail

// TLEF binary format: "TLEF", version u16, C u32, video count u32, then per
// video: id length u32 + bytes, label u32, stream u8, map count u32,
// h/w/c u32 each, raw f32 little-endian values per map.
inline void write_dataset(const FeatureDataset& ds, std::ostream& out) {
  ds.validate();
  out.write(detail::kDatasetMagic, 4);
  detail::put<std::uint16_t>(out, detail::kDatasetVersion);
  detail::put<std::uint32_t>(out, ds.classes);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(ds.videos.size()));
  for (const auto& v : ds.videos) {
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(v.id.size()));
    out.write(v.id.data(), static_cast<std::streamsize>(v.id.size()));
    detail::put<std::uint32_t>(out, v.label);
    detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(v.stream));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(v.maps.size()));
    const auto& m0 = v.maps.front();
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(m0.height()));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(m0.width()));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(m0.channels()));
    for (const auto& m : v.maps)
      for (double x : m.values())
        detail::put<float>(out, static_cast<float>(x));
  }
  if (!out) throw DatasetIoError(DatasetIoError::Kind::Io, 0, "write failed");
}

inline void write_dataset(const FeatureDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DatasetIoError(DatasetIoError::Kind::Io, 0, "cannot open " + path);
  write_dataset(ds, out);
}

inline FeatureDataset read_dataset(std::istream& in) {
  detail::Reader r(in);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (std::memcmp(magic, detail::kDatasetMagic, 4) != 0)
    throw DatasetIoError(DatasetIoError::Kind::Magic, 0, "bad magic");
  const auto version = r.scalar<std::uint16_t>("version");
  if (version != detail::kDatasetVersion)
    throw DatasetIoError(DatasetIoError::Kind::Version, 4,
                         "unsupported version " + std::to_string(version));
  FeatureDataset ds;
  ds.classes = r.scalar<std::uint32_t>("class count");
  const auto n_videos = r.scalar<std::uint32_t>("video count");
  ds.videos.reserve(n_videos);
  for (std::uint32_t i = 0; i < n_videos; ++i) {
    VideoRecord v;
    const auto id_len = r.scalar<std::uint32_t>("id length");
    if (id_len > 4096)
      throw DatasetIoError(DatasetIoError::Kind::Shape, r.offset(),
                           "implausible id length");
    v.id.resize(id_len);
    r.bytes(v.id.data(), id_len, "id");
    v.label = r.scalar<std::uint32_t>("label");
    v.stream = static_cast<StreamTag>(r.scalar<std::uint8_t>("stream tag"));
    const auto n_maps = r.scalar<std::uint32_t>("map count");
    const auto h = r.scalar<std::uint32_t>("height");
    const auto w = r.scalar<std::uint32_t>("width");
    const auto c = r.scalar<std::uint32_t>("channels");
    if (h == 0 || w == 0 || c == 0 || n_maps == 0 ||
        std::uint64_t(h) * w * c > detail::kMaxMapElems)
      throw DatasetIoError(DatasetIoError::Kind::Shape, r.offset(),
                           "bad shape in header of " + v.id);
    const std::size_t elems = std::size_t(h) * w * c;
    std::vector<float> buf(elems);
    for (std::uint32_t mi = 0; mi < n_maps; ++mi) {
      r.bytes(buf.data(), elems * sizeof(float), "map values");
      std::vector<double> vals(buf.begin(), buf.end());
      v.maps.emplace_back(h, w, c, std::move(vals));
    }
    ds.videos.push_back(std::move(v));
  }
  ds.class_names.reserve(ds.classes);
  for (std::uint32_t i = 0; i < ds.classes; ++i)
    ds.class_names.push_back("class" + std::to_string(i));
  ds.validate();
  return ds;
}

inline FeatureDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DatasetIoError(DatasetIoError::Kind::Io, 0, "cannot open " + path);
  return read_dataset(in);
}

struct SynthConfig {
  std::uint32_t classes = 5;
  std::size_t videos_per_class = 20;
  std::size_t frames_per_video = 12;
  std::size_t h = 4, w = 4, c = 8;
  double difficulty = 0.2;
  std::uint64_t seed = 1;
  SplitTag split = SplitTag::Train;
};

// Synthetic feature-map dataset. Each class has a fixed activation template
// (a subset of elements carry a high value, the rest a low one); frames are
// the template under multiplicative noise plus occasional distractor spikes.
// The class pattern is present in every frame, while spikes are not, so
// aggregations that reward consistent activation separate classes best. The
// template depends only on (seed, class): train and test splits share
// templates but draw disjoint video noise. Values are quantized to f32 so
// TLEF round-trips are exact.
inline FeatureDataset synth_dataset(const SynthConfig& cfg) {
  if (cfg.classes < 2 || cfg.videos_per_class == 0 ||
      cfg.frames_per_video == 0 || cfg.h == 0 || cfg.w == 0 || cfg.c == 0)
    throw std::invalid_argument("synth_dataset: degenerate sizes");
  const std::size_t elems = cfg.h * cfg.w * cfg.c;
  FeatureDataset ds;
  ds.classes = cfg.classes;
  ds.split = cfg.split;
  for (std::uint32_t k = 0; k < cfg.classes; ++k)
    ds.class_names.push_back("class" + std::to_string(k));

  const double hi = 1.6, lo = 0.6;
  for (std::uint32_t k = 0; k < cfg.classes; ++k) {
    SplitMix64 trng(mix_seed(cfg.seed, 0x7E391A7EULL + k));
    std::vector<double> tmpl(elems);
    for (auto& t : tmpl) t = trng.uniform() < 0.35 ? hi : lo;
    for (std::size_t vi = 0; vi < cfg.videos_per_class; ++vi) {
      SplitMix64 vrng(mix_seed(
          mix_seed(cfg.seed, static_cast<std::uint64_t>(cfg.split)), k, vi));
      VideoRecord v;
      v.id = "c" + std::to_string(k) + "_v" + std::to_string(vi) +
             (cfg.split == SplitTag::Test ? "_test" : "");
      v.label = k;
      for (std::size_t f = 0; f < cfg.frames_per_video; ++f) {
        std::vector<double> vals(elems);
        for (std::size_t i = 0; i < elems; ++i) {
          double x = tmpl[i] * (1.0 + cfg.difficulty * vrng.uniform(-1.0, 1.0));
          // distractor spike: a low element briefly looks active
          if (tmpl[i] == lo &&
              vrng.uniform() < 0.5 * cfg.difficulty)
            x = hi * (1.0 + cfg.difficulty * vrng.uniform(-1.0, 1.0));
          vals[i] = static_cast<double>(static_cast<float>(x));
        }
        v.maps.emplace_back(cfg.h, cfg.w, cfg.c, std::move(vals));
      }
      ds.videos.push_back(std::move(v));
    }
  }
  return ds;
}

}  // namespace tle
