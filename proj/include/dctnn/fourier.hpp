#pragma once

#include "dctnn/types.hpp"

namespace dctnn {

// Orthonormal 2D DFT, 1/sqrt(HW) normalization in both directions, so
// idft2(dft2(x)) == x and Parseval holds exactly. DC sits at (0, 0).
//
// Implemented as Y = F_H * X * F_W^T with the unitary DFT matrix
// F_N(a, b) = exp(-2*pi*i*a*b / N) / sqrt(N). At the image sizes this
// project handles (<= 320) two dense complex products are faster than a
// naive quadruple loop by a factor of N^2 and need no radix restrictions.

// Unitary DFT matrix of size n, cached per n. Thread-safe.
const CMat& dft_matrix(Index n);

CMat dft2(const CMat& x);
CMat dft2(const Mat& x);
CMat idft2(const CMat& x);

// Real part of idft2. Callers assert the discarded imaginary part is
// negligible when the input is conjugate-symmetric.
Mat idft2_real(const CMat& x);

}  // namespace dctnn
