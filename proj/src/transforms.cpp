#include "solab/transforms.hpp"

#include <cmath>

#include "solab/fft.hpp"

namespace solab {

namespace {

void check_margin(const ComplexGrid& h, const char* op) {
    if (!h.support_within_margin())
        fail(ErrorCode::SupportMargin,
             std::string(op) + ": input support touches the zero-padding margin "
                               "(must stay within the central half of the box)");
}

// Signed frequency index for bin k of an N-point transform.
inline int signed_index(int k, int n) { return k > n / 2 ? k - n : k; }

} // namespace

ComplexGrid beurling_transform(const ComplexGrid& h) {
    check_margin(h, "beurling_transform");
    const int n = h.n();
    std::vector<Complex> hat = h.data();
    fft2d_inplace(hat, n, false);
    const double fx = M_PI / h.box().half_width_x;
    const double fy = M_PI / h.box().half_width_y;
    for (int ky = 0; ky < n; ++ky) {
        const double eta = fy * signed_index(ky, n);
        for (int kx = 0; kx < n; ++kx) {
            const double xi = fx * signed_index(kx, n);
            Complex& v = hat[static_cast<std::size_t>(ky) * n + kx];
            if (kx == 0 && ky == 0) {
                v = Complex(0.0, 0.0);
            } else {
                const Complex zeta(xi, eta);
                v *= std::conj(zeta) / zeta;
            }
        }
    }
    fft2d_inplace(hat, n, true);
    ComplexGrid out(h.box(), n);
    out.data() = std::move(hat);
    return out;
}

CauchyTransform cauchy_transform(const ComplexGrid& h) {
    check_margin(h, "cauchy_transform");
    const int n = h.n();
    std::vector<Complex> hat = h.data();
    fft2d_inplace(hat, n, false);
    const Complex mean = hat[0] / static_cast<double>(static_cast<std::size_t>(n) * n);
    const double fx = M_PI / h.box().half_width_x;
    const double fy = M_PI / h.box().half_width_y;
    for (int ky = 0; ky < n; ++ky) {
        const double eta = fy * signed_index(ky, n);
        for (int kx = 0; kx < n; ++kx) {
            const double xi = fx * signed_index(kx, n);
            Complex& v = hat[static_cast<std::size_t>(ky) * n + kx];
            if (kx == 0 && ky == 0) {
                v = Complex(0.0, 0.0);
            } else {
                // d/dzbar has symbol (i/2) zeta, so its inverse is -2i / zeta.
                const Complex zeta(xi, eta);
                v *= Complex(0.0, -2.0) / zeta;
            }
        }
    }
    fft2d_inplace(hat, n, true);
    CauchyTransform out;
    out.periodic = ComplexGrid(h.box(), n);
    out.periodic.data() = std::move(hat);
    out.mean = mean;
    out.gauge = Complex(0.0, 0.0);
    if (out.periodic.contains(Complex(0.0, 0.0)))
        out.gauge = out.periodic.sample_bicubic(Complex(0.0, 0.0));
    return out;
}

ComplexGrid CauchyTransform::to_grid() const {
    ComplexGrid out(periodic.box(), periodic.n());
    for (int iy = 0; iy < periodic.n(); ++iy)
        for (int ix = 0; ix < periodic.n(); ++ix) out.at(ix, iy) = value_at(ix, iy);
    return out;
}

ComplexGrid cauchy_transform_grid(const ComplexGrid& h) { return cauchy_transform(h).to_grid(); }

} // namespace solab
