#include "solab/counterexamples.hpp"

#include <cmath>

namespace solab {

namespace {
constexpr double kE = 2.718281828459045235360287471353;
// Terms beyond this contribute below double precision (1/26! ~ 2.5e-27).
constexpr int kSeriesCap = 26;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}
} // namespace

Complex eval_mu_counterexample(Complex z, int terms) {
    if (terms < 1) fail(ErrorCode::InvalidArgument, "term count must be >= 1");
    const double x = z.real();
    const double y = z.imag();
    Complex num(0.0, 0.0);
    Complex den(0.0, 0.0);
    double fact = 1.0;
    for (int n = 1; n <= terms; ++n) {
        fact *= n;
        const double c = std::cos(x / fact);
        const double s = std::sin(x / fact);
        const double g = std::exp(-(y * y) / (fact * fact)) / (2.0 * fact);
        const double t = 2.0 * y / fact;
        num += Complex(c, -t * s) * g;
        den += Complex(c, t * s) * g;
    }
    const double scale = 1.0 / (2.0 * kE);
    return scale * num / (1.0 + scale * den);
}

Complex eval_w_mu(Complex z, int terms) {
    if (terms < 1) fail(ErrorCode::InvalidArgument, "term count must be >= 1");
    const double x = z.real();
    const double y = z.imag();
    double sum = 0.0;
    double fact = 1.0;
    for (int n = 1; n <= terms; ++n) {
        fact *= n;
        sum += std::sin(x / fact) * std::exp(-(y * y) / (fact * fact));
    }
    return z + sum / (2.0 * kE);
}

double mu_counterexample_bound() { return (kE - 1.0) / (kE + 1.0); }

double verify_beltrami_identity(int terms, const Box& box, int grid_n, double h) {
    // Intended step range is [1e-6, 1e-3]; coarser steps are accepted and
    // simply surface as an O(h^2) residual in the caller's threshold check.
    if (h <= 0.0) fail(ErrorCode::InvalidArgument, "step must be positive");
    ComplexGrid grid(box, grid_n);
    double worst = 0.0;
    for (int iy = 0; iy < grid_n; ++iy)
        for (int ix = 0; ix < grid_n; ++ix) {
            const Complex z = grid.point(ix, iy);
            const Complex wx =
                (eval_w_mu(z + Complex(h, 0), terms) - eval_w_mu(z - Complex(h, 0), terms)) /
                (2.0 * h);
            const Complex wy =
                (eval_w_mu(z + Complex(0, h), terms) - eval_w_mu(z - Complex(0, h), terms)) /
                (2.0 * h);
            const Complex wz = 0.5 * (wx - Complex(0.0, 1.0) * wy);
            const Complex wzb = 0.5 * (wx + Complex(0.0, 1.0) * wy);
            const Complex mu = eval_mu_counterexample(z, terms);
            worst = std::max(worst, std::abs(wzb - mu * wz));
        }
    return worst;
}

namespace {

// Tail sum over N < n <= cap of the factorial sine series at level scale 1/n!.
// kind Beltrami: (1/2e) sin(x/n!); kind Diophantine: c sin(2 pi x / n!).
double tail_value(TailKind kind, int tail_start, double x, double coefficient) {
    double sum = 0.0;
    double fact = factorial(tail_start);
    for (int n = tail_start + 1; n <= kSeriesCap; ++n) {
        fact *= n;
        if (kind == TailKind::Beltrami)
            sum += std::sin(x / fact);
        else
            sum += std::sin(2.0 * M_PI * x / fact);
    }
    return std::abs(coefficient * sum);
}

double sampled_sup(TailKind kind, int tail_start, double coefficient, double lo, double hi,
                   int samples, const std::vector<double>& extra) {
    double best = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double x = lo + (hi - lo) * i / samples;
        best = std::max(best, tail_value(kind, tail_start, x, coefficient));
    }
    for (double x : extra) best = std::max(best, tail_value(kind, tail_start, x, coefficient));
    return best;
}

} // namespace

std::vector<TailRow> tail_sup_profile(TailKind kind, int n_from, int n_to, double x_range,
                                      double omega_dot_one) {
    if (n_from >= n_to) fail(ErrorCode::InvalidArgument, "need n_from < n_to");
    if (n_from < 1) fail(ErrorCode::InvalidArgument, "n_from must be >= 1");
    if (omega_dot_one == 0.0) fail(ErrorCode::InvalidArgument, "omega sum must be nonzero");

    const double coefficient =
        kind == TailKind::Beltrami ? 1.0 / (2.0 * kE) : 1.0 / (2.0 * M_PI * omega_dot_one);

    std::vector<TailRow> rows;
    for (int N = n_from; N <= n_to; ++N) {
        TailRow row;
        row.tail_start = N;
        row.single_term_sup = std::abs(coefficient);
        row.fixed_tail_sup = sampled_sup(kind, N, coefficient, -x_range, x_range, 512, {});

        // Witness making the first tail term maximal: sin argument pi/2 at n = N+1.
        const double next_fact = factorial(N + 1);
        const double witness = kind == TailKind::Beltrami ? M_PI * next_fact / 2.0
                                                          : next_fact / 4.0;
        row.moving_tail_sup =
            sampled_sup(kind, N, coefficient, -witness, witness, 512, {witness});
        rows.push_back(row);
    }
    return rows;
}

} // namespace solab
