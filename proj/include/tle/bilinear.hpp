#pragma once

#include <stdexcept>
#include <vector>

#include "tle/tensor.hpp"

namespace tle {

// Full bilinear pooling: y = vec(sum_l m_l m_l^T), column-concatenated,
// so y has length c^2 with y[col*c + row] = sum_l m_l[row]*m_l[col].
inline EncodedVector bilinear_forward(const FeatureMap& x) {
  const std::size_t c = x.channels();
  EncodedVector y(c * c, 0.0);
  for (std::size_t l = 0; l < x.locations(); ++l) {
    auto m = x.location(l);
    for (std::size_t col = 0; col < c; ++col) {
      const double mc = m[col];
      double* ycol = y.data() + col * c;
      for (std::size_t row = 0; row < c; ++row) ycol[row] += m[row] * mc;
    }
  }
  return y;
}

// Gradient of bilinear_forward: dX at location l is (G + G^T) m_l with G the
// c x c reshape of dy.
inline FeatureMap bilinear_backward(const FeatureMap& x,
                                    const EncodedVector& dy) {
  const std::size_t c = x.channels();
  if (dy.size() != c * c)
    throw std::invalid_argument("bilinear_backward: dy length mismatch");
  FeatureMap dx = FeatureMap::zeros(x.height(), x.width(), x.channels());
  for (std::size_t l = 0; l < x.locations(); ++l) {
    auto m = x.location(l);
    auto g = dx.location(l);
    for (std::size_t row = 0; row < c; ++row) {
      double acc = 0.0;
      for (std::size_t col = 0; col < c; ++col)
        acc += (dy[col * c + row] + dy[row * c + col]) * m[col];
      g[row] = acc;
    }
  }
  return dx;
}

}  // namespace tle
