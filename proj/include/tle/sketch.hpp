#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tle/fft.hpp"
#include "tle/rng.hpp"
#include "tle/tensor.hpp"

namespace tle {

// Count-sketch projection parameters: per input coordinate one hash bucket
// in [0,d) and one Rademacher sign. Tables are a pure function of
// (c, d, seed) via SplitMix64, so only the triple needs to be persisted.
struct SketchParams {
  std::size_t c = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> bucket;
  std::vector<std::int8_t> sign;

  static SketchParams make(std::size_t c, std::size_t d, std::uint64_t seed) {
    if (c == 0 || d == 0)
      throw std::invalid_argument("SketchParams: dimensions must be positive");
    SketchParams p;
    p.c = c;
    p.d = d;
    p.seed = seed;
    p.bucket.resize(c);
    p.sign.resize(c);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < c; ++i)
      p.bucket[i] = static_cast<std::uint32_t>(rng.below(d));
    for (std::size_t i = 0; i < c; ++i)
      p.sign[i] = (rng.next() & 1) ? 1 : -1;
    return p;
  }
};

// out[b] = sum_{i: h(i)=b} s(i) * v[i]
inline std::vector<double> count_sketch_apply(std::span<const double> v,
                                              const SketchParams& p) {
  if (v.size() != p.c)
    throw std::invalid_argument("count_sketch_apply: length mismatch");
  std::vector<double> out(p.d, 0.0);
  for (std::size_t i = 0; i < p.c; ++i)
    out[p.bucket[i]] += static_cast<double>(p.sign[i]) * v[i];
  return out;
}

// Transpose of the count sketch: gradient gather back to input coordinates.
inline void count_sketch_apply_t(std::span<const double> g,
                                 const SketchParams& p,
                                 std::span<double> acc) {
  for (std::size_t i = 0; i < p.c; ++i)
    acc[i] += static_cast<double>(p.sign[i]) * g[p.bucket[i]];
}

// Two independent count sketches with shared (c, d) and distinct derived
// seeds. Tables are frozen at construction and never trained.
struct TensorSketchEncoder {
  SketchParams p1;
  SketchParams p2;
  std::uint64_t base_seed = 0;

  static TensorSketchEncoder make(std::size_t c, std::size_t d,
                                  std::uint64_t seed) {
    TensorSketchEncoder e;
    e.base_seed = seed;
    e.p1 = SketchParams::make(c, d, mix_seed(seed, 0xA11CE5ULL));
    e.p2 = SketchParams::make(c, d, mix_seed(seed, 0xB0B5E5ULL));
    return e;
  }

  std::size_t input_dim() const { return p1.c; }
  std::size_t output_dim() const { return p1.d; }
};

// Tensor sketch of one aggregated map: per spatial location, circular
// convolution of the two count sketches of the channel vector via FFT,
// summed over locations. Approximates the bilinear feature in d dims.
inline EncodedVector tensor_sketch_forward(const FeatureMap& x,
                                           const TensorSketchEncoder& enc) {
  if (x.channels() != enc.input_dim())
    throw std::invalid_argument("tensor_sketch_forward: channel mismatch");
  const std::size_t d = enc.output_dim();
  std::vector<Complex> acc(d, Complex(0, 0));
  for (std::size_t l = 0; l < x.locations(); ++l) {
    auto m = x.location(l);
    std::vector<Complex> fa = fft_real(count_sketch_apply(m, enc.p1));
    std::vector<Complex> fb = fft_real(count_sketch_apply(m, enc.p2));
    for (std::size_t i = 0; i < d; ++i) acc[i] += fa[i] * fb[i];
  }
  fft(acc, true);
  EncodedVector y(d);
  double max_re = 0.0, max_im = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    y[i] = acc[i].real();
    max_re = std::max(max_re, std::abs(acc[i].real()));
    max_im = std::max(max_im, std::abs(acc[i].imag()));
  }
  if (max_im > 1e-8 * std::max(1.0, max_re))
    throw std::runtime_error("tensor_sketch_forward: imaginary residue");
  return y;
}

// Exact gradient of tensor_sketch_forward. Per location, with a = cs1(m)
// and b = cs2(m) and y = a (*) b (circular convolution):
//   da = ifft(fft(dy) . conj(fft(b))),  db = ifft(fft(dy) . conj(fft(a)))
// and the count-sketch backward is the sign-weighted gather transpose.
inline FeatureMap tensor_sketch_backward(const FeatureMap& x,
                                         const TensorSketchEncoder& enc,
                                         const EncodedVector& dy) {
  const std::size_t d = enc.output_dim();
  if (x.channels() != enc.input_dim())
    throw std::invalid_argument("tensor_sketch_backward: channel mismatch");
  if (dy.size() != d)
    throw std::invalid_argument("tensor_sketch_backward: dy length mismatch");
  std::vector<Complex> fdy(dy.begin(), dy.end());
  fft(fdy, false);
  FeatureMap dx = FeatureMap::zeros(x.height(), x.width(), x.channels());
  for (std::size_t l = 0; l < x.locations(); ++l) {
    auto m = x.location(l);
    std::vector<Complex> fa = fft_real(count_sketch_apply(m, enc.p1));
    std::vector<Complex> fb = fft_real(count_sketch_apply(m, enc.p2));
    std::vector<Complex> da(d), db(d);
    for (std::size_t i = 0; i < d; ++i) {
      da[i] = fdy[i] * std::conj(fb[i]);
      db[i] = fdy[i] * std::conj(fa[i]);
    }
    fft(da, true);
    fft(db, true);
    std::vector<double> dar(d), dbr(d);
    for (std::size_t i = 0; i < d; ++i) {
      dar[i] = da[i].real();
      dbr[i] = db[i].real();
    }
    auto g = dx.location(l);
    count_sketch_apply_t(dar, enc.p1, g);
    count_sketch_apply_t(dbr, enc.p2, g);
  }
  return dx;
}

}  // namespace tle
