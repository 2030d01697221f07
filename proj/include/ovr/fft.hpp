#pragma once

#include <span>
#include <vector>

#include "ovr/common.hpp"

namespace ovr::fft {

// In-place complex DFT. Radix-2 for power-of-two sizes, direct O(n^2)
// evaluation otherwise (only tiny test sizes ever hit that path).
// Forward applies no normalization; inverse scales by 1/n.
void transform(std::vector<cd>& a, bool inverse);

// Real-input forward transform, returning the n/2+1 non-negative bins.
std::vector<cd> rfft(std::span<const double> x);

// Inverse of rfft for even n. The input is assumed Hermitian: the
// imaginary parts of bin 0 and the Nyquist bin are ignored.
std::vector<double> irfft(std::span<const cd> bins, int n);

// Exact adjoints of the two maps above, used by the training backward
// pass. `grad_bins` holds dL/dRe + i*dL/dIm per bin.
std::vector<double> rfft_adjoint(std::span<const cd> grad_bins, int n);
std::vector<cd> irfft_adjoint(std::span<const double> grad_time, int n);

}  // namespace ovr::fft
