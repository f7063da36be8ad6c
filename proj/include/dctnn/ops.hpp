#pragma once

#include "dctnn/types.hpp"

namespace dctnn {

// Numerically stabilized softmax along `axis` (0 = down columns, 1 = along
// rows). Rows/columns on that axis are nonnegative and sum to 1.
Mat softmax(const Mat& v, int axis);

// Per-row normalization to zero mean / unit variance followed by the affine
// map gain, bias (both of length v.cols()).
Mat layer_norm(const Mat& v, const Vec& gain, const Vec& bias, Real eps);

// Exact GELU, 0.5 x (1 + erf(x / sqrt(2))).
Mat gelu(const Mat& v);
Real gelu_scalar(Real x);
Real gelu_grad_scalar(Real x);

}  // namespace dctnn
