#pragma once

// Shared helpers for the test binaries.

#include <cmath>
#include <random>

#include "solab/beltrami.hpp"
#include "solab/series.hpp"

namespace testsupport {

using solab::Box;
using solab::Complex;

// Smooth random coefficient: a few Gaussian bumps under a hard-decay radial
// window keeping the support inside the central half of the box, scaled so
// the sampled sup is exactly k.
inline solab::BeltramiField random_smooth_field(const Box& box, int n, double k,
                                                std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Bump {
        double cx, cy, s;
        Complex a;
    };
    std::vector<Bump> bumps;
    const double inner = 0.25 * std::min(box.half_width_x, box.half_width_y);
    for (int b = 0; b < 4; ++b)
        bumps.push_back({inner * u(rng), inner * u(rng),
                         inner * (0.3 + 0.3 * std::abs(u(rng))), Complex(u(rng), u(rng))});
    const double cutoff = 0.3 * std::min(box.half_width_x, box.half_width_y);
    solab::ComplexGrid g(box, n);
    g.fill([&](Complex z) -> Complex {
        const double r = std::abs(z - box.center);
        const double w = std::exp(-std::pow(r / cutoff, 8.0));
        if (w < 1e-300) return Complex(0.0, 0.0);
        Complex v(0.0, 0.0);
        for (const auto& bump : bumps) {
            const double d2 = std::norm(z - Complex(bump.cx, bump.cy));
            v += bump.a * std::exp(-d2 / (bump.s * bump.s));
        }
        return v * w;
    });
    const double m = g.max_abs();
    for (auto& v : g.data()) v *= k / m;
    return solab::BeltramiField(std::move(g));
}

// Random trig polynomial with zero average: modes with denominators from a
// divisor-closed set, coefficients in the unit disk.
inline solab::PontryaginSeries random_trig_polynomial(int dimension, int max_modes,
                                                      std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-4, 4);
    const std::int64_t dens[] = {1, 2, 3, 4, 6, 12};
    std::uniform_int_distribution<int> den_pick(0, 5);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    solab::PontryaginSeries g(dimension);
    for (int m = 0; m < max_modes; ++m) {
        solab::RationalMode mode;
        for (int j = 0; j < dimension; ++j)
            mode.entries.emplace_back(num(rng), dens[den_pick(rng)]);
        if (mode.is_zero()) continue;
        g.add_coefficient(mode, Complex(coef(rng), coef(rng)));
    }
    return g;
}

} // namespace testsupport
