#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tle/tensor.hpp"

namespace tle {

// sign(y) * sqrt(|y|), element-wise
inline EncodedVector signed_sqrt(const EncodedVector& y) {
  EncodedVector z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double s = std::sqrt(std::abs(y[i]));
    z[i] = y[i] < 0 ? -s : s;
  }
  return z;
}

// dz/dy = 1 / (2 * max(sqrt(|y|), eps)); the eps clamp bounds the gradient
// at the kink (cap 5e5).
inline EncodedVector signed_sqrt_backward(const EncodedVector& y,
                                          const EncodedVector& dz) {
  constexpr double eps = 1e-6;
  if (dz.size() != y.size())
    throw std::invalid_argument("signed_sqrt_backward: length mismatch");
  EncodedVector dy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = std::max(std::sqrt(std::abs(y[i])), eps);
    dy[i] = dz[i] / (2.0 * r);
  }
  return dy;
}

inline double l2_norm(const EncodedVector& z) {
  double s = 0.0;
  for (double v : z) s += v * v;
  return std::sqrt(s);
}

inline EncodedVector l2_normalize(const EncodedVector& z) {
  constexpr double eps = 1e-12;
  const double inv = 1.0 / std::max(l2_norm(z), eps);
  EncodedVector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] * inv;
  return out;
}

// Projection Jacobian: dz = (dout - zhat * <zhat, dout>) / ||z||
inline EncodedVector l2_normalize_backward(const EncodedVector& z,
                                           const EncodedVector& dout) {
  constexpr double eps = 1e-12;
  if (dout.size() != z.size())
    throw std::invalid_argument("l2_normalize_backward: length mismatch");
  const double norm = std::max(l2_norm(z), eps);
  const double inv = 1.0 / norm;
  double dot = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) dot += z[i] * inv * dout[i];
  EncodedVector dz(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    dz[i] = (dout[i] - z[i] * inv * dot) * inv;
  return dz;
}

// Affine encoder used by the fully-connected pooling variant: maps the
// flattened h*w*c map to out_dim features.
struct FcEncoder {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weight;  // out_dim x in_dim, row-major
  std::vector<double> bias;    // out_dim

  static FcEncoder zeros(std::size_t in_dim, std::size_t out_dim) {
    FcEncoder e;
    e.in_dim = in_dim;
    e.out_dim = out_dim;
    e.weight.assign(out_dim * in_dim, 0.0);
    e.bias.assign(out_dim, 0.0);
    return e;
  }
};

inline EncodedVector fc_encode(const FeatureMap& x, const FcEncoder& enc) {
  if (x.size() != enc.in_dim)
    throw std::invalid_argument("fc_encode: input dim mismatch");
  EncodedVector y(enc.out_dim);
  const auto& v = x.values();
  for (std::size_t r = 0; r < enc.out_dim; ++r) {
    double acc = enc.bias[r];
    const double* wr = enc.weight.data() + r * enc.in_dim;
    for (std::size_t i = 0; i < enc.in_dim; ++i) acc += wr[i] * v[i];
    y[r] = acc;
  }
  return y;
}

struct FcGrads {
  std::vector<double> dweight;
  std::vector<double> dbias;
  FeatureMap dx;
};

inline FcGrads fc_backward(const FeatureMap& x, const FcEncoder& enc,
                           const EncodedVector& dy) {
  if (dy.size() != enc.out_dim)
    throw std::invalid_argument("fc_backward: dy length mismatch");
  FcGrads g{std::vector<double>(enc.weight.size(), 0.0),
            std::vector<double>(enc.out_dim, 0.0),
            FeatureMap::zeros(x.height(), x.width(), x.channels())};
  const auto& v = x.values();
  for (std::size_t r = 0; r < enc.out_dim; ++r) {
    g.dbias[r] = dy[r];
    double* gw = g.dweight.data() + r * enc.in_dim;
    const double* wr = enc.weight.data() + r * enc.in_dim;
    for (std::size_t i = 0; i < enc.in_dim; ++i) {
      gw[i] = dy[r] * v[i];
      g.dx[i] += dy[r] * wr[i];
    }
  }
  return g;
}

// Linear classifier over encoded features.
struct ClassifierHead {
  std::size_t classes = 0;
  std::size_t in_dim = 0;
  std::vector<double> weight;  // classes x in_dim, row-major
  std::vector<double> bias;    // classes

  static ClassifierHead zeros(std::size_t in_dim, std::size_t classes) {
    if (classes < 2)
      throw std::invalid_argument("ClassifierHead: need at least 2 classes");
    ClassifierHead h;
    h.classes = classes;
    h.in_dim = in_dim;
    h.weight.assign(classes * in_dim, 0.0);
    h.bias.assign(classes, 0.0);
    return h;
  }

  EncodedVector logits(const EncodedVector& z) const {
    if (z.size() != in_dim)
      throw std::invalid_argument("ClassifierHead: feature dim mismatch");
    EncodedVector out(classes);
    for (std::size_t r = 0; r < classes; ++r) {
      double acc = bias[r];
      const double* wr = weight.data() + r * in_dim;
      for (std::size_t i = 0; i < in_dim; ++i) acc += wr[i] * z[i];
      out[r] = acc;
    }
    return out;
  }
};

struct HeadGrads {
  std::vector<double> dweight;
  std::vector<double> dbias;
  EncodedVector dz;
};

inline HeadGrads head_backward(const ClassifierHead& h, const EncodedVector& z,
                               const EncodedVector& dlogits) {
  HeadGrads g{std::vector<double>(h.weight.size(), 0.0),
              std::vector<double>(h.classes, 0.0),
              EncodedVector(h.in_dim, 0.0)};
  for (std::size_t r = 0; r < h.classes; ++r) {
    g.dbias[r] = dlogits[r];
    double* gw = g.dweight.data() + r * h.in_dim;
    const double* wr = h.weight.data() + r * h.in_dim;
    for (std::size_t i = 0; i < h.in_dim; ++i) {
      gw[i] = dlogits[r] * z[i];
      g.dz[i] += dlogits[r] * wr[i];
    }
  }
  return g;
}

struct SoftmaxResult {
  double loss = 0.0;
  EncodedVector dlogits;
  EncodedVector probs;
};

// Cross-entropy over a log-sum-exp stabilized softmax.
inline SoftmaxResult softmax_cross_entropy(const EncodedVector& logits,
                                           std::size_t label) {
  if (label >= logits.size())
    throw std::invalid_argument("softmax_cross_entropy: label out of range");
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double sum = 0.0;
  EncodedVector probs(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - mx);
    sum += probs[i];
  }
  const double inv = 1.0 / sum;
  for (double& p : probs) p *= inv;
  SoftmaxResult r;
  r.loss = -(logits[label] - mx - std::log(sum));
  r.dlogits = probs;
  r.dlogits[label] -= 1.0;
  r.probs = std::move(probs);
  return r;
}

}  // namespace tle
