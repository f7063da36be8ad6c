#include "dctnn/ops.hpp"

#include <cmath>

namespace dctnn {

Mat softmax(const Mat& v, int axis) {
  require_dims(axis == 0 || axis == 1, "softmax: axis must be 0 or 1");
  if (axis == 0) return softmax(Mat(v.transpose()), 1).transpose();
  Mat out(v.rows(), v.cols());
  for (Index i = 0; i < v.rows(); ++i) {
    const Real m = v.row(i).maxCoeff();
    out.row(i) = (v.row(i).array() - m).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Mat layer_norm(const Mat& v, const Vec& gain, const Vec& bias, Real eps) {
  require_dims(gain.size() == v.cols() && bias.size() == v.cols(),
               "layer_norm: gain/bias must match last dimension");
  Mat out(v.rows(), v.cols());
  const Real d = static_cast<Real>(v.cols());
  for (Index i = 0; i < v.rows(); ++i) {
    const Real mean = v.row(i).mean();
    const Real var = (v.row(i).array() - mean).square().sum() / d;
    const Real inv = 1.0 / std::sqrt(var + eps);
    out.row(i) = ((v.row(i).array() - mean) * inv) * gain.transpose().array() + bias.transpose().array();
  }
  return out;
}

Real gelu_scalar(Real x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

Real gelu_grad_scalar(Real x) {
  return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) + x * std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

Mat gelu(const Mat& v) { return v.unaryExpr([](Real x) { return gelu_scalar(x); }); }

}  // namespace dctnn
