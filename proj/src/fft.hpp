#pragma once

#include <complex>
#include <vector>

namespace tailwalk::detail {

/// In-place multidimensional DCT-I (FFTW REDFT00, unnormalized) of a
/// row-major array with `n` points per axis.
void dct1(std::vector<double>& data, int d, long n);

/// In-place multidimensional complex DFT, sign -1 (forward) or +1.
void dft(std::vector<std::complex<double>>& data, int d, long n, int sign);

}  // namespace tailwalk::detail
