#include "solab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "solab/fft.hpp"

namespace solab {

ComplexGrid::ComplexGrid(const Box& box, int n) : box_(box), n_(n) {
    if (!is_power_of_two(n)) fail(ErrorCode::InvalidArgument, "grid resolution must be a power of two");
    if (box.half_width_x <= 0.0 || box.half_width_y <= 0.0)
        fail(ErrorCode::InvalidArgument, "box half-widths must be positive");
    data_.assign(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0));
}

bool ComplexGrid::contains(Complex z, double slack) const {
    return std::abs(z.real() - box_.center.real()) <= box_.half_width_x + slack &&
           std::abs(z.imag() - box_.center.imag()) <= box_.half_width_y + slack;
}

void ComplexGrid::fill(const std::function<Complex(Complex)>& f) {
    for (int iy = 0; iy < n_; ++iy)
        for (int ix = 0; ix < n_; ++ix) at(ix, iy) = f(point(ix, iy));
}

double ComplexGrid::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

double ComplexGrid::l2_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

namespace {
double catmull_rom(double p0, double p1, double p2, double p3, double t) {
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                          t * (3.0 * (p1 - p2) + p3 - p0)));
}
} // namespace

Complex ComplexGrid::sample_bilinear(Complex z) const {
    if (!contains(z, 0.5 * std::max(dx(), dy())))
        fail(ErrorCode::OutOfDomain, "sample point outside grid box");
    const double fx = (z.real() - (box_.center.real() - box_.half_width_x)) / dx() - 0.5;
    const double fy = (z.imag() - (box_.center.imag() - box_.half_width_y)) / dy() - 0.5;
    const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, n_ - 2);
    const int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, n_ - 2);
    const double tx = std::clamp(fx - ix, 0.0, 1.0);
    const double ty = std::clamp(fy - iy, 0.0, 1.0);
    return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) +
           (1 - tx) * ty * at(ix, iy + 1) + tx * ty * at(ix + 1, iy + 1);
}

Complex ComplexGrid::sample_bicubic(Complex z) const {
    if (!contains(z, 0.5 * std::max(dx(), dy())))
        fail(ErrorCode::OutOfDomain, "sample point outside grid box");
    const double fx = (z.real() - (box_.center.real() - box_.half_width_x)) / dx() - 0.5;
    const double fy = (z.imag() - (box_.center.imag() - box_.half_width_y)) / dy() - 0.5;
    const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, n_ - 1);
    const int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, n_ - 1);
    const double tx = std::clamp(fx - ix, 0.0, 1.0);
    const double ty = std::clamp(fy - iy, 0.0, 1.0);

    auto clampi = [this](int i) { return std::clamp(i, 0, n_ - 1); };
    double rows_re[4], rows_im[4];
    for (int r = -1; r <= 2; ++r) {
        const int yy = clampi(iy + r);
        double vre[4], vim[4];
        for (int c = -1; c <= 2; ++c) {
            const Complex& v = at(clampi(ix + c), yy);
            vre[c + 1] = v.real();
            vim[c + 1] = v.imag();
        }
        rows_re[r + 1] = catmull_rom(vre[0], vre[1], vre[2], vre[3], tx);
        rows_im[r + 1] = catmull_rom(vim[0], vim[1], vim[2], vim[3], tx);
    }
    return Complex(catmull_rom(rows_re[0], rows_re[1], rows_re[2], rows_re[3], ty),
                   catmull_rom(rows_im[0], rows_im[1], rows_im[2], rows_im[3], ty));
}

bool ComplexGrid::support_within_margin(double threshold) const {
    for (int iy = 0; iy < n_; ++iy)
        for (int ix = 0; ix < n_; ++ix) {
            if (std::abs(at(ix, iy)) <= threshold) continue;
            if (std::abs(x(ix) - box_.center.real()) > 0.5 * box_.half_width_x + dx() ||
                std::abs(y(iy) - box_.center.imag()) > 0.5 * box_.half_width_y + dy())
                return false;
        }
    return true;
}

namespace {
constexpr char kMagic[8] = {'S', 'A', 'B', 'G', 'R', 'I', 'D', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
} // namespace

void ComplexGrid::write_binary(const std::string& path, bool complex64) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
    out.write(kMagic, sizeof(kMagic));
    put<double>(out, box_.center.real());
    put<double>(out, box_.center.imag());
    put<double>(out, box_.half_width_x);
    put<double>(out, box_.half_width_y);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(n_));
    put<std::uint32_t>(out, complex64 ? 1u : 2u);
    for (const auto& v : data_) {
        if (complex64) {
            put<float>(out, static_cast<float>(v.real()));
            put<float>(out, static_cast<float>(v.imag()));
        } else {
            put<double>(out, v.real());
            put<double>(out, v.imag());
        }
    }
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

ComplexGrid ComplexGrid::read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        fail(ErrorCode::ParseError, "bad grid container magic in " + path);
    Box box;
    const double cx = get<double>(in);
    const double cy = get<double>(in);
    box.center = Complex(cx, cy);
    box.half_width_x = get<double>(in);
    box.half_width_y = get<double>(in);
    const std::uint32_t n = get<std::uint32_t>(in);
    const std::uint32_t dtype = get<std::uint32_t>(in);
    if (dtype != 1 && dtype != 2) fail(ErrorCode::ParseError, "unknown grid dtype tag");
    ComplexGrid grid(box, static_cast<int>(n));
    for (auto& v : grid.data_) {
        if (dtype == 1) {
            const float re = get<float>(in);
            const float im = get<float>(in);
            v = Complex(re, im);
        } else {
            const double re = get<double>(in);
            const double im = get<double>(in);
            v = Complex(re, im);
        }
    }
    if (!in) fail(ErrorCode::ParseError, "truncated grid container " + path);
    return grid;
}

void ComplexGrid::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
    out << "x,y,re,im\n";
    char line[128];
    for (int iy = 0; iy < n_; ++iy)
        for (int ix = 0; ix < n_; ++ix) {
            const Complex& v = at(ix, iy);
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", x(ix), y(iy),
                          v.real(), v.imag());
            out << line;
        }
}

} // namespace solab
