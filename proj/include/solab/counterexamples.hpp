#pragma once

#include <complex>
#include <vector>

#include "solab/grid.hpp"

namespace solab {

// Closed-form factorial-scale Beltrami coefficient with |mu| < (e-1)/(e+1),
// both defining sums truncated at N terms.
Complex eval_mu_counterexample(Complex z, int terms);

// Its quasiconformal solution  w(z) = z + (1/2e) sum_{n<=N} sin(x/n!) exp(-y^2/n!^2).
Complex eval_w_mu(Complex z, int terms);

// The strict sup bound (e-1)/(e+1).
double mu_counterexample_bound();

// max over grid nodes of |w_zbar - mu w_z| with central finite differences of
// step h applied to eval_w_mu, mu at matching truncation.
double verify_beltrami_identity(int terms, const Box& box, int grid_n, double h);

enum class TailKind { Beltrami, Diophantine };

struct TailRow {
    int tail_start = 0;        // N: the tail is the sum over n > N
    double fixed_tail_sup = 0.0;   // sampled sup over |x| <= x_range
    double moving_tail_sup = 0.0;  // sampled sup over |x| <= pi (N+1)!/2 (witness included)
    double single_term_sup = 0.0;  // 1/(2e) for Beltrami, |c| for the diophantine series
};

// Demonstrates locally-uniform-but-not-uniform convergence of the factorial
// series: fixed-x tails decay while the moving sup stays bounded below.
// For the diophantine kind, omega_dot_one is the divisor sum omega_1+...+omega_n.
std::vector<TailRow> tail_sup_profile(TailKind kind, int n_from, int n_to, double x_range,
                                      double omega_dot_one = 1.0);

} // namespace solab
