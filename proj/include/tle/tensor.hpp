#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tle {

// Encoded feature vectors are plain dense vectors of doubles.
using EncodedVector = std::vector<double>;

// One segment's convolutional feature block, h x w x c, location-major:
// index = ((row*w)+col)*c + channel. Location-major means the c-vector at a
// spatial location is contiguous, so flattening to (h*w) x c is a view.
class FeatureMap {
 public:
  FeatureMap(std::size_t h, std::size_t w, std::size_t c,
             std::vector<double> values)
      : h_(h), w_(w), c_(c), values_(std::move(values)) {
    if (h == 0 || w == 0 || c == 0)
      throw std::invalid_argument("FeatureMap: dimensions must be positive");
    if (values_.size() != h * w * c)
      throw std::invalid_argument(
          "FeatureMap: expected " + std::to_string(h * w * c) +
          " values, got " + std::to_string(values_.size()));
    for (double v : values_)
      if (!std::isfinite(v))
        throw std::invalid_argument("FeatureMap: non-finite value");
  }

  static FeatureMap zeros(std::size_t h, std::size_t w, std::size_t c) {
    return FeatureMap(h, w, c, std::vector<double>(h * w * c, 0.0));
  }

  std::size_t height() const { return h_; }
  std::size_t width() const { return w_; }
  std::size_t channels() const { return c_; }
  std::size_t locations() const { return h_ * w_; }
  std::size_t size() const { return values_.size(); }

  double& at(std::size_t row, std::size_t col, std::size_t ch) {
    return values_[(row * w_ + col) * c_ + ch];
  }
  double at(std::size_t row, std::size_t col, std::size_t ch) const {
    return values_[(row * w_ + col) * c_ + ch];
  }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Channel vector at flattened spatial location l: row l of the (hw) x c
  // matrix view.
  std::span<const double> location(std::size_t l) const {
    return {values_.data() + l * c_, c_};
  }
  std::span<double> location(std::size_t l) {
    return {values_.data() + l * c_, c_};
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool same_shape(const FeatureMap& o) const {
    return h_ == o.h_ && w_ == o.w_ && c_ == o.c_;
  }

 private:
  std::size_t h_, w_, c_;
  std::vector<double> values_;
};

enum class EwOp { Add, Mul, Max };

inline FeatureMap elementwise(const FeatureMap& a, const FeatureMap& b,
                              EwOp op) {
  if (!a.same_shape(b))
    throw std::invalid_argument("elementwise: shape mismatch");
  std::vector<double> out(a.size());
  const auto& va = a.values();
  const auto& vb = b.values();
  switch (op) {
    case EwOp::Add:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] + vb[i];
      break;
    case EwOp::Mul:
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = va[i] * vb[i];
      break;
    case EwOp::Max:
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = va[i] > vb[i] ? va[i] : vb[i];
      break;
  }
  return FeatureMap(a.height(), a.width(), a.channels(), std::move(out));
}

}  // namespace tle
