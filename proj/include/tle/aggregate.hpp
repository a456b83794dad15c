#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tle/tensor.hpp"

namespace tle {

enum class AggregationMode { Average, Maximum, Product };

inline const char* to_string(AggregationMode m) {
  switch (m) {
    case AggregationMode::Average: return "average";
    case AggregationMode::Maximum: return "maximum";
    case AggregationMode::Product: return "product";
  }
  return "?";
}

inline AggregationMode aggregation_from_string(const std::string& s) {
  if (s == "average") return AggregationMode::Average;
  if (s == "maximum" || s == "max") return AggregationMode::Maximum;
  if (s == "product") return AggregationMode::Product;
  throw std::invalid_argument("unknown aggregation mode: " + s);
}

// K >= 2 feature maps of identical shape, one per temporal segment.
class SegmentSet {
 public:
  explicit SegmentSet(std::vector<FeatureMap> segments)
      : segments_(std::move(segments)) {
    if (segments_.size() < 2)
      throw std::invalid_argument("SegmentSet: need at least 2 segments");
    for (const auto& s : segments_)
      if (!s.same_shape(segments_.front()))
        throw std::invalid_argument("SegmentSet: segment shape mismatch");
  }

  std::size_t k() const { return segments_.size(); }
  const FeatureMap& segment(std::size_t i) const { return segments_[i]; }
  const std::vector<FeatureMap>& segments() const { return segments_; }

 private:
  std::vector<FeatureMap> segments_;
};

// Element-wise temporal aggregation over K segments.
inline FeatureMap aggregate_forward(const SegmentSet& s, AggregationMode mode) {
  const std::size_t k = s.k();
  const std::size_t n = s.segment(0).size();
  std::vector<double> out(s.segment(0).values());
  switch (mode) {
    case AggregationMode::Average: {
      for (std::size_t j = 1; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) out[i] += s.segment(j)[i];
      const double inv_k = 1.0 / static_cast<double>(k);
      for (double& v : out) v *= inv_k;
      break;
    }
    case AggregationMode::Maximum:
      for (std::size_t j = 1; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
          if (s.segment(j)[i] > out[i]) out[i] = s.segment(j)[i];
      break;
    case AggregationMode::Product:
      for (std::size_t j = 1; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) out[i] *= s.segment(j)[i];
      break;
  }
  const auto& s0 = s.segment(0);
  return FeatureMap(s0.height(), s0.width(), s0.channels(), std::move(out));
}

// Gradients with respect to each segment given dLoss/dX.
// Product mode uses leave-one-out prefix/suffix products, never division,
// so zero-valued inputs still produce finite gradients. Maximum mode routes
// the gradient to the arg-max segment; ties go to the lowest segment index.
inline std::vector<FeatureMap> aggregate_backward(const SegmentSet& s,
                                                  AggregationMode mode,
                                                  const FeatureMap& dX) {
  if (!dX.same_shape(s.segment(0)))
    throw std::invalid_argument("aggregate_backward: dX shape mismatch");
  const std::size_t k = s.k();
  const std::size_t n = dX.size();
  const std::size_t h = dX.height(), w = dX.width(), c = dX.channels();

  std::vector<FeatureMap> grads;
  grads.reserve(k);
  switch (mode) {
    case AggregationMode::Average: {
      std::vector<double> g(n);
      const double inv_k = 1.0 / static_cast<double>(k);
      for (std::size_t i = 0; i < n; ++i) g[i] = dX[i] * inv_k;
      for (std::size_t j = 0; j < k; ++j)
        grads.emplace_back(h, w, c, g);
      break;
    }
    case AggregationMode::Maximum: {
      for (std::size_t j = 0; j < k; ++j)
        grads.push_back(FeatureMap::zeros(h, w, c));
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j)
          if (s.segment(j)[i] > s.segment(best)[i]) best = j;
        grads[best][i] = dX[i];
      }
      break;
    }
    case AggregationMode::Product: {
      // prefix[j] = prod of segments [0, j), suffix[j] = prod of (j, k)
      std::vector<std::vector<double>> prefix(k + 1,
                                              std::vector<double>(n, 1.0));
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
          prefix[j + 1][i] = prefix[j][i] * s.segment(j)[i];
      std::vector<double> suffix(n, 1.0);
      std::vector<std::vector<double>> out(k, std::vector<double>(n));
      for (std::size_t jj = k; jj-- > 0;) {
        for (std::size_t i = 0; i < n; ++i)
          out[jj][i] = prefix[jj][i] * suffix[i] * dX[i];
        for (std::size_t i = 0; i < n; ++i) suffix[i] *= s.segment(jj)[i];
      }
      for (std::size_t j = 0; j < k; ++j)
        grads.emplace_back(h, w, c, std::move(out[j]));
      break;
    }
  }
  return grads;
}

}  // namespace tle
