#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "solab/error.hpp"

namespace solab {

using Complex = std::complex<double>;

// Axis-aligned box given by center and per-axis half-widths.
struct Box {
    Complex center{0.0, 0.0};
    double half_width_x = 1.0;
    double half_width_y = 1.0;
};

// N x N complex samples at cell centers over a box, row-major [iy*N + ix].
// N must be a power of two.
class ComplexGrid {
public:
    ComplexGrid() = default;
    ComplexGrid(const Box& box, int n);

    const Box& box() const { return box_; }
    int n() const { return n_; }
    double dx() const { return 2.0 * box_.half_width_x / n_; }
    double dy() const { return 2.0 * box_.half_width_y / n_; }
    double cell_area() const { return dx() * dy(); }

    double x(int ix) const { return box_.center.real() - box_.half_width_x + (ix + 0.5) * dx(); }
    double y(int iy) const { return box_.center.imag() - box_.half_width_y + (iy + 0.5) * dy(); }
    Complex point(int ix, int iy) const { return Complex(x(ix), y(iy)); }

    Complex& at(int ix, int iy) { return data_[static_cast<std::size_t>(iy) * n_ + ix]; }
    const Complex& at(int ix, int iy) const { return data_[static_cast<std::size_t>(iy) * n_ + ix]; }
    std::vector<Complex>& data() { return data_; }
    const std::vector<Complex>& data() const { return data_; }

    bool contains(Complex z, double slack = 0.0) const;

    // Fills samples from an evaluator of the plane point.
    void fill(const std::function<Complex(Complex)>& f);

    double max_abs() const;
    double l2_norm() const;  // sqrt(sum |v|^2), plain grid norm

    // Catmull-Rom bicubic interpolation; throws OutOfDomain beyond the box.
    Complex sample_bicubic(Complex z) const;
    Complex sample_bilinear(Complex z) const;

    // True when all samples above `threshold` in modulus stay within the
    // central half of the box per axis (the mandatory zero-padding margin).
    // The default matches the compact-support enforcement level eps_supp.
    bool support_within_margin(double threshold = 1e-8) const;

    void write_binary(const std::string& path, bool complex64 = true) const;
    static ComplexGrid read_binary(const std::string& path);
    void write_csv(const std::string& path) const;

private:
    Box box_;
    int n_ = 0;
    std::vector<Complex> data_;
};

} // namespace solab
