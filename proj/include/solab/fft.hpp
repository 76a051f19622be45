#pragma once

#include <complex>
#include <vector>

namespace solab {

// In-place radix-2 FFT, length must be a power of two.
// Forward uses exp(-2 pi i jk/N); inverse divides by N.
void fft_inplace(std::complex<double>* data, int n, bool inverse);

// 2-D transform of an n x n row-major array (rows then columns).
void fft2d_inplace(std::vector<std::complex<double>>& data, int n, bool inverse);

bool is_power_of_two(int n);

} // namespace solab
