#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "solab/transforms.hpp"

using namespace solab;

namespace {

Box square_box(double hw) {
    Box b;
    b.half_width_x = hw;
    b.half_width_y = hw;
    return b;
}

// Central-difference Wirtinger derivatives of an analytic evaluator.
template <typename F>
Complex fd_dz(F&& f, Complex z, double h = 1e-5) {
    const Complex fx = (f(z + Complex(h, 0)) - f(z - Complex(h, 0))) / (2.0 * h);
    const Complex fy = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2.0 * h);
    return 0.5 * (fx - Complex(0, 1) * fy);
}

template <typename F>
Complex fd_dzbar(F&& f, Complex z, double h = 1e-5) {
    const Complex fx = (f(z + Complex(h, 0)) - f(z - Complex(h, 0))) / (2.0 * h);
    const Complex fy = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2.0 * h);
    return 0.5 * (fx + Complex(0, 1) * fy);
}

} // namespace

TEST_CASE("beurling maps a plane-wave grid mode to itself times conj(zeta)/zeta") {
    const int n = 64;
    ComplexGrid h(square_box(1.0), n);
    const int kx = 5, ky = -3;
    const double xi = M_PI * kx / h.box().half_width_x;
    const double eta = M_PI * ky / h.box().half_width_y;
    // Windowless plane wave violates the support margin on purpose: fill raw.
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            h.at(ix, iy) = std::exp(Complex(0.0, xi * h.x(ix) + eta * h.y(iy)));
    // Bypass the margin check concern by scaling: the mode fills the box, so
    // verify through the raw multiplier identity instead of the public API
    // guard; a windowed wave would not be an eigenvector.
    const Complex zeta(xi, eta);
    const Complex factor = std::conj(zeta) / zeta;
    CHECK(std::abs(std::abs(factor) - 1.0) < 1e-15);

    // Use a margin-safe indicator trick: compare S on the windowed wave with
    // the windowed image of the factor at interior points only.
    ComplexGrid hw(square_box(2.0), 256);
    auto window = [](Complex z) {
        const double r = std::abs(z);
        return std::exp(-std::pow(r / 0.55, 8.0));
    };
    const double xi2 = M_PI * 16 / 2.0, eta2 = -M_PI * 10 / 2.0;
    hw.fill([&](Complex z) {
        return window(z) * std::exp(Complex(0.0, xi2 * z.real() + eta2 * z.imag()));
    });
    ComplexGrid sw = beurling_transform(hw);
    const Complex zeta2(xi2, eta2);
    const Complex factor2 = std::conj(zeta2) / zeta2;
    // Away from the window roll-off the wave is locally pure, so S acts by the
    // multiplier up to window-curvature corrections.
    double worst = 0.0;
    for (int iy = 0; iy < 256; ++iy)
        for (int ix = 0; ix < 256; ++ix)
            if (std::abs(hw.point(ix, iy)) < 0.25)
                worst = std::max(worst, std::abs(sw.at(ix, iy) - factor2 * hw.at(ix, iy)));
    CHECK(worst < 5e-2);
}

TEST_CASE("beurling is an l2 isometry to 1e-12 on mean-zero compact data") {
    // The multiplier is unimodular away from the zeroed DC bin, so the
    // isometry statement is exact on data with vanishing grid mean.
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        ComplexGrid h(square_box(2.0), 128);
        std::vector<std::pair<int, int>> support;
        Complex total(0.0, 0.0);
        for (int iy = 0; iy < 128; ++iy)
            for (int ix = 0; ix < 128; ++ix) {
                const Complex z = h.point(ix, iy);
                if (std::abs(z.real()) > 0.95 || std::abs(z.imag()) > 0.95) continue;
                h.at(ix, iy) = Complex(u(rng), u(rng));
                total += h.at(ix, iy);
                support.push_back({ix, iy});
            }
        const Complex mean = total / static_cast<double>(support.size());
        for (auto [ix, iy] : support) h.at(ix, iy) -= mean;
        ComplexGrid sh = beurling_transform(h);
        CHECK(std::abs(sh.l2_norm() - h.l2_norm()) <= 1e-12 * h.l2_norm());
    }
}

TEST_CASE("S(dzbar phi) matches dz phi for a smooth bump (finite-difference oracle)") {
    const int n = 512;
    ComplexGrid h(square_box(2.0), n);
    auto phi = [](Complex z) { return std::exp(-25.0 * std::norm(z)); };
    h.fill([&](Complex z) { return fd_dzbar(phi, z); });
    ComplexGrid sh = beurling_transform(h);
    double worst = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            worst = std::max(worst, std::abs(sh.at(ix, iy) - fd_dz(phi, h.point(ix, iy))));
    CHECK(worst < 1e-4);
}

TEST_CASE("cauchy of zero is zero") {
    ComplexGrid z(square_box(1.0), 32);
    CauchyTransform c = cauchy_transform(z);
    CHECK(c.mean == Complex(0.0, 0.0));
    CHECK(c.to_grid().max_abs() == 0.0);
}

TEST_CASE("cauchy of the unit disk indicator matches the direct quadrature oracle") {
    // Free-space oracle: Ch(z) = -(1/pi) sum h(w) dA / (w - z), the singular
    // cell dropped (its odd kernel integrates to ~0 at cell centers).
    const int n = 512;
    ComplexGrid disk(square_box(2.5), n);
    disk.fill([](Complex z) { return std::abs(z) < 1.0 ? Complex(1, 0) : Complex(0, 0); });
    CauchyTransform c = cauchy_transform(disk);

    auto quad_at_cell = [&](int jx, int jy) {
        Complex acc(0, 0);
        const Complex z = disk.point(jx, jy);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                if (ix == jx && iy == jy) continue;
                if (disk.at(ix, iy) == Complex(0, 0)) continue;
                acc += disk.at(ix, iy) / (disk.point(ix, iy) - z);
            }
        return -acc * disk.cell_area() / M_PI;
    };

    // Gauge both sides through the same near-origin cell.
    const int c0 = n / 2;
    const Complex z0 = disk.point(c0, c0);
    const Complex q0 = quad_at_cell(c0, c0);
    const Complex s0 = c.value_at(c0, c0);
    double worst_quad = 0.0, worst_zbar = 0.0;
    for (int t = 0; t < 24; ++t) {
        const double theta = 2.0 * M_PI * t / 24.0;
        const double r = 0.15 + 0.65 * ((t * 7) % 24) / 23.0;
        const int jx = c0 + static_cast<int>(r * std::cos(theta) / disk.dx());
        const int jy = c0 + static_cast<int>(r * std::sin(theta) / disk.dy());
        const Complex z = disk.point(jx, jy);
        if (std::abs(z) > 0.85) continue;
        const Complex spectral = c.value_at(jx, jy) - s0;
        worst_quad = std::max(worst_quad, std::abs(spectral - (quad_at_cell(jx, jy) - q0)));
        worst_zbar = std::max(worst_zbar, std::abs(spectral - (std::conj(z) - std::conj(z0))));
    }
    CHECK(worst_quad < 5e-3);
    CHECK(worst_zbar < 5e-3);  // interior value shape is zbar up to gauge
}

TEST_CASE("dzbar(Ch) reproduces h by finite differences for a smooth bump") {
    const int n = 512;
    ComplexGrid h(square_box(2.5), n);
    h.fill([](Complex z) {
        const double g = std::exp(-16.0 * std::norm(z));
        return Complex(g, 0.3 * g);
    });
    CauchyTransform c = cauchy_transform(h);
    ComplexGrid chg = c.to_grid();
    double worst = 0.0;
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix) {
            const Complex fx = (chg.at(ix + 1, iy) - chg.at(ix - 1, iy)) / (2.0 * chg.dx());
            const Complex fy = (chg.at(ix, iy + 1) - chg.at(ix, iy - 1)) / (2.0 * chg.dy());
            const Complex dzb = 0.5 * (fx + Complex(0, 1) * fy);
            worst = std::max(worst, std::abs(dzb - h.at(ix, iy)));
        }
    CHECK(worst < 1e-3);
    CHECK(std::abs(c.eval(Complex(0.0, 0.0))) == 0.0);  // gauge (Ch)(0) = 0
}

TEST_CASE("dz(Ch) equals S h on the grid") {
    const int n = 256;
    ComplexGrid h(square_box(2.0), n);
    h.fill([](Complex z) { return Complex(std::exp(-25.0 * std::norm(z)), 0.0); });
    CauchyTransform c = cauchy_transform(h);
    ComplexGrid sh = beurling_transform(h);
    ComplexGrid chg = c.to_grid();
    double worst = 0.0;
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix) {
            const Complex fx = (chg.at(ix + 1, iy) - chg.at(ix - 1, iy)) / (2.0 * chg.dx());
            const Complex fy = (chg.at(ix, iy + 1) - chg.at(ix, iy - 1)) / (2.0 * chg.dy());
            const Complex dz = 0.5 * (fx - Complex(0, 1) * fy);
            worst = std::max(worst, std::abs(dz - sh.at(ix, iy)));
        }
    CHECK(worst < 5e-3);
}

TEST_CASE("support touching the padding margin is rejected") {
    ComplexGrid h(square_box(1.0), 64);
    h.fill([](Complex z) { return std::abs(z - Complex(0.9, 0.0)) < 0.05 ? Complex(1, 0)
                                                                         : Complex(0, 0); });
    CHECK_THROWS_WITH_AS(beurling_transform(h), doctest::Contains("SupportMargin"), Error);
    CHECK_THROWS_AS(cauchy_transform(h), Error);
}

TEST_CASE("grid binary container round trip") {
    ComplexGrid g(square_box(1.5), 16);
    g.fill([](Complex z) { return Complex(z.real() * 2.0, -z.imag()); });
    const std::string path = "/tmp/solab_grid_test.sabgrid";
    g.write_binary(path, false);  // complex128
    ComplexGrid back = ComplexGrid::read_binary(path);
    CHECK(back.n() == 16);
    CHECK(back.box().half_width_x == doctest::Approx(1.5));
    double worst = 0.0;
    for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 16; ++ix)
            worst = std::max(worst, std::abs(back.at(ix, iy) - g.at(ix, iy)));
    CHECK(worst == 0.0);

    g.write_binary(path, true);  // complex64 narrows
    ComplexGrid narrow = ComplexGrid::read_binary(path);
    worst = 0.0;
    for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 16; ++ix)
            worst = std::max(worst, std::abs(narrow.at(ix, iy) - g.at(ix, iy)));
    CHECK(worst < 1e-6);
}

TEST_CASE("grid resolution must be a power of two") {
    CHECK_THROWS_AS(ComplexGrid(square_box(1.0), 100), Error);
    CHECK_NOTHROW(ComplexGrid(square_box(1.0), 128));
}

TEST_CASE("grid CSV export lists x,y,re,im per cell") {
    ComplexGrid g(square_box(1.0), 2);
    g.fill([](Complex z) { return Complex(z.real(), 2.0 * z.imag()); });
    const std::string path = "/tmp/solab_grid_test.csv";
    g.write_csv(path);
    std::ifstream in(path);
    REQUIRE(in);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,re,im");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
}
