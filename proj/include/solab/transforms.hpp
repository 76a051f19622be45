#pragma once

#include "solab/grid.hpp"

namespace solab {

// Beurling transform S h on the padded grid: frequency multiplier conj(zeta)/zeta
// with zeta = xi + i eta the frequency in the d/dz-diagonalizing convention,
// zero frequency mapped to 0.  An l2 isometry on the grid.
// Rejects inputs whose support touches the padding margin (outer half of the box).
ComplexGrid beurling_transform(const ComplexGrid& h);

// Cauchy transform parts:  C h = periodic part (mean-zero, spectral -2i/zeta)
// + mean * conj(z) - gauge,  so that  d/dzbar (C h) = h  and (C h)(0) = 0.
struct CauchyTransform {
    ComplexGrid periodic;
    Complex mean{0.0, 0.0};
    Complex gauge{0.0, 0.0};

    Complex value_at(int ix, int iy) const {
        return periodic.at(ix, iy) + mean * std::conj(periodic.point(ix, iy)) - gauge;
    }
    // Off-node evaluation (bicubic on the periodic part; z-bar term analytic).
    Complex eval(Complex z) const {
        return periodic.sample_bicubic(z) + mean * std::conj(z) - gauge;
    }
    ComplexGrid to_grid() const;
};

CauchyTransform cauchy_transform(const ComplexGrid& h);

// Convenience when only node values are needed.
ComplexGrid cauchy_transform_grid(const ComplexGrid& h);

} // namespace solab
