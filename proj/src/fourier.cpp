#include "dctnn/fourier.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace dctnn {

namespace {

std::mutex cache_mutex;
std::map<Index, std::unique_ptr<CMat>> cache;

}  // namespace

const CMat& dft_matrix(Index n) {
  require_dims(n >= 1, "dft_matrix: n must be >= 1");
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto f = std::make_unique<CMat>(n, n);
  const Real scale = 1.0 / std::sqrt(static_cast<Real>(n));
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      // Reduce a*b mod n before forming the angle; keeps the twiddle factors
      // exactly periodic for large indices.
      const Index k = (a * b) % n;
      const Real angle = -2.0 * M_PI * static_cast<Real>(k) / static_cast<Real>(n);
      (*f)(a, b) = Complex(std::cos(angle), std::sin(angle)) * scale;
    }
  }
  return *cache.emplace(n, std::move(f)).first->second;
}

CMat dft2(const CMat& x) {
  const CMat& fh = dft_matrix(x.rows());
  const CMat& fw = dft_matrix(x.cols());
  return fh * x * fw.transpose();
}

CMat dft2(const Mat& x) { return dft2(CMat(x.cast<Complex>())); }

CMat idft2(const CMat& x) {
  const CMat& fh = dft_matrix(x.rows());
  const CMat& fw = dft_matrix(x.cols());
  return fh.adjoint() * x * fw.conjugate();
}

Mat idft2_real(const CMat& x) { return idft2(x).real(); }

}  // namespace dctnn
