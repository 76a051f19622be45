#pragma once

#include <functional>

#include "solab/transforms.hpp"

namespace solab {

// Compactly supported Beltrami coefficient sampled on a grid; sup_bound is the
// measured sampled sup, required < 1.
struct BeltramiField {
    ComplexGrid grid;
    double sup_bound = 0.0;

    BeltramiField() = default;
    explicit BeltramiField(ComplexGrid g);
    Complex eval(Complex z) const { return grid.contains(z) ? grid.sample_bicubic(z) : Complex(0, 0); }
};

BeltramiField make_field(const Box& box, int n, const std::function<Complex(Complex)>& mu,
                         double support_truncation = 1e-13);

// Normal solution f = z + C h of f_zbar = mu f_z with f(0) = 0.
struct NormalSolutionField {
    ComplexGrid h;
    CauchyTransform ch;
    ComplexGrid f_nodes;
    int iterations = 0;
    double residual = 0.0;  // final successive-difference sup
    std::vector<double> diff_history;     // sup of successive differences
    std::vector<double> l2_diff_history;  // grid l2 of successive differences

    // Laurent data of the exact far field outside the support disk:
    // f(z) = z + c + sum_k moments[k] / z^{k+1},  moments[k] = (1/pi) int h w^k dA,
    // and c = (1/pi) int h/w dA matches the f(0) = 0 gauge.
    std::vector<Complex> moments;
    Complex laurent_constant{0.0, 0.0};
    double support_radius = 0.0;

    Complex eval(Complex z) const { return z + ch.eval(z); }
    Complex eval_laurent(Complex z) const;
    // Grid evaluation inside, exact Laurent tail outside the support annulus,
    // smoothly blended in between.
    Complex eval_extended(Complex z) const;
};

// Neumann iteration h <- mu (S h) + mu from h = 0 until sup successive
// difference < tol, then f = z + C h.  The iteration differences satisfy
// d_{k+1} = mu S d_k, so their grid l2 norms contract by a factor <= k
// (S is an l2 isometry); sup differences may transiently exceed that for
// rough coefficients.  ContractivityViolated fires on an l2 ratio > 1.
NormalSolutionField solve_normal(const BeltramiField& mu, double tol, int max_iter);

struct ResidualReport {
    double max_residual = 0.0;            // max interior |f_zbar - mu f_z|, central differences
    long long dilatation_violations = 0;  // interior points with |f_zbar| > k |f_z|
};

ResidualReport beltrami_residual(const NormalSolutionField& f, const BeltramiField& mu);

// Same residual computed for an arbitrary map evaluator against a coefficient
// evaluator; used for composed maps.
ResidualReport residual_on_grid(const std::function<Complex(Complex)>& f,
                                const std::function<Complex(Complex)>& mu, const Box& box, int n,
                                double sup_bound);

// z -> f(z)/f(1): fixes 0 and 1 exactly, infinity asymptotically.
std::function<Complex(Complex)> normalize_013(const NormalSolutionField& f);

struct DistortionReport {
    double a_emp = 0.0;  // max |f(zeta)-zeta| / (||mu|| |zeta|^{1-2/p})
    double b_emp = 0.0;  // max (|zeta|-|f(zeta)|) / (||mu|| |f(zeta)|^{1-2/p}), clamped at 0
};

DistortionReport distortion_report(const NormalSolutionField& f, const BeltramiField& mu, double p);

} // namespace solab
