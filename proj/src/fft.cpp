#include "solab/fft.hpp"

#include <cmath>

#include "solab/error.hpp"

namespace solab {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::complex<double>* data, int n, bool inverse) {
    if (!is_power_of_two(n)) fail(ErrorCode::InvalidArgument, "FFT length must be a power of two");
    // Bit-reversal permutation.
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / len;
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                std::complex<double> u = data[i + j];
                std::complex<double> v = data[i + j + len / 2] * w;
                data[i + j] = u + v;
                data[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / n;
        for (int i = 0; i < n; ++i) data[i] *= inv;
    }
}

void fft2d_inplace(std::vector<std::complex<double>>& data, int n, bool inverse) {
    if (static_cast<int>(data.size()) != n * n)
        fail(ErrorCode::InvalidArgument, "fft2d size mismatch");
    for (int row = 0; row < n; ++row) fft_inplace(data.data() + row * n, n, inverse);
    std::vector<std::complex<double>> col(n);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) col[r] = data[r * n + c];
        fft_inplace(col.data(), n, inverse);
        for (int r = 0; r < n; ++r) data[r * n + c] = col[r];
    }
}

} // namespace solab
