#include "solab/beltrami.hpp"

#include <cmath>
#include <memory>

namespace solab {

BeltramiField::BeltramiField(ComplexGrid g) : grid(std::move(g)) {
    sup_bound = grid.max_abs();
    if (sup_bound >= 1.0)
        fail(ErrorCode::InvalidArgument,
             "Beltrami coefficient sup " + std::to_string(sup_bound) + " must be < 1");
}

BeltramiField make_field(const Box& box, int n, const std::function<Complex(Complex)>& mu,
                         double support_truncation) {
    ComplexGrid g(box, n);
    g.fill([&](Complex z) {
        Complex v = mu(z);
        return std::abs(v) < support_truncation ? Complex(0.0, 0.0) : v;
    });
    return BeltramiField(std::move(g));
}

Complex NormalSolutionField::eval_laurent(Complex z) const {
    Complex acc = laurent_constant;
    const Complex inv = 1.0 / z;
    Complex pow = inv;
    for (const Complex& m : moments) {
        acc += m * pow;
        pow *= inv;
    }
    return z + acc;
}

Complex NormalSolutionField::eval_extended(Complex z) const {
    const double r = std::abs(z);
    double lo = 1.3 * support_radius;
    double hi = 1.55 * support_radius;
    const double box_limit = 0.98 * std::min(ch.periodic.box().half_width_x,
                                             ch.periodic.box().half_width_y);
    lo = std::min(lo, box_limit);
    hi = std::min(hi, box_limit + 1e-12);
    if (r <= lo && ch.periodic.contains(z)) return eval(z);
    if (r >= hi || !ch.periodic.contains(z)) return eval_laurent(z);
    const double t = (r - lo) / (hi - lo);
    const double w = 0.5 * (1.0 - std::cos(M_PI * t));
    return (1.0 - w) * eval(z) + w * eval_laurent(z);
}

NormalSolutionField solve_normal(const BeltramiField& mu, double tol, int max_iter) {
    if (tol <= 0.0) fail(ErrorCode::InvalidArgument, "tol must be positive");
    if (max_iter <= 0) fail(ErrorCode::InvalidArgument, "max_iter must be positive");
    if (!mu.grid.support_within_margin())
        fail(ErrorCode::SupportMargin, "solve_normal: coefficient support touches the padding margin");

    const int n = mu.grid.n();
    NormalSolutionField out;
    out.h = ComplexGrid(mu.grid.box(), n);

    // h_0 = 0, so the first update is h_1 = mu.
    double prev_l2 = 0.0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        ComplexGrid sh = beurling_transform(out.h);
        ComplexGrid next(mu.grid.box(), n);
        double diff = 0.0;
        double l2 = 0.0;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Complex m = mu.grid.at(ix, iy);
                const Complex v = (m == Complex(0.0, 0.0)) ? Complex(0.0, 0.0)
                                                           : m * sh.at(ix, iy) + m;
                diff = std::max(diff, std::abs(v - out.h.at(ix, iy)));
                l2 += std::norm(v - out.h.at(ix, iy));
                next.at(ix, iy) = v;
            }
        l2 = std::sqrt(l2);
        out.h = std::move(next);
        out.iterations = iter;
        out.residual = diff;
        out.diff_history.push_back(diff);
        out.l2_diff_history.push_back(l2);
        if (diff < tol) break;
        if (iter > 1 && prev_l2 > 10.0 * tol && l2 > prev_l2 * (1.0 + 1e-12))
            fail(ErrorCode::ContractivityViolated,
                 "l2 successive-difference ratio " + std::to_string(l2 / prev_l2) + " exceeds 1");
        prev_l2 = l2;
        if (iter == max_iter)
            fail(ErrorCode::IterationBudgetExceeded,
                 "no convergence after " + std::to_string(max_iter) +
                     " iterations; last residual " + std::to_string(diff));
    }

    out.ch = cauchy_transform(out.h);
    out.f_nodes = ComplexGrid(mu.grid.box(), n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            out.f_nodes.at(ix, iy) = mu.grid.point(ix, iy) + out.ch.value_at(ix, iy);

    // Far-field Laurent data: h is compactly supported, so f is holomorphic
    // outside the support disk with exact moment coefficients.
    constexpr int kMoments = 20;
    out.moments.assign(kMoments, Complex(0.0, 0.0));
    const double dA = out.h.cell_area();
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const Complex v = out.h.at(ix, iy);
            if (v == Complex(0.0, 0.0)) continue;
            const Complex w = out.h.point(ix, iy);
            out.support_radius = std::max(out.support_radius, std::abs(w));
            out.laurent_constant += v / w;
            Complex pw(1.0, 0.0);
            for (int k = 0; k < kMoments; ++k) {
                out.moments[k] += v * pw;
                pw *= w;
            }
        }
    for (auto& m : out.moments) m *= dA / M_PI;
    out.laurent_constant *= dA / M_PI;
    return out;
}

namespace {

// Central-difference Wirtinger derivatives of a node field at interior (ix,iy).
struct Wirtinger {
    Complex fz;
    Complex fzb;
};

Wirtinger derivatives_at(const ComplexGrid& f, int ix, int iy) {
    const Complex fx = (f.at(ix + 1, iy) - f.at(ix - 1, iy)) / (2.0 * f.dx());
    const Complex fy = (f.at(ix, iy + 1) - f.at(ix, iy - 1)) / (2.0 * f.dy());
    return {0.5 * (fx - Complex(0.0, 1.0) * fy), 0.5 * (fx + Complex(0.0, 1.0) * fy)};
}

} // namespace

ResidualReport beltrami_residual(const NormalSolutionField& f, const BeltramiField& mu) {
    ResidualReport rep;
    const int n = f.f_nodes.n();
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix) {
            const Wirtinger d = derivatives_at(f.f_nodes, ix, iy);
            const Complex m = mu.grid.at(ix, iy);
            rep.max_residual = std::max(rep.max_residual, std::abs(d.fzb - m * d.fz));
            if (std::abs(d.fzb) > mu.sup_bound * std::abs(d.fz)) ++rep.dilatation_violations;
        }
    return rep;
}

ResidualReport residual_on_grid(const std::function<Complex(Complex)>& f,
                                const std::function<Complex(Complex)>& mu, const Box& box, int n,
                                double sup_bound) {
    ComplexGrid fg(box, n);
    fg.fill(f);
    ResidualReport rep;
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix) {
            const Wirtinger d = derivatives_at(fg, ix, iy);
            const Complex m = mu(fg.point(ix, iy));
            rep.max_residual = std::max(rep.max_residual, std::abs(d.fzb - m * d.fz));
            if (std::abs(d.fzb) > sup_bound * std::abs(d.fz)) ++rep.dilatation_violations;
        }
    return rep;
}

std::function<Complex(Complex)> normalize_013(const NormalSolutionField& f) {
    const Complex f1 = f.eval(Complex(1.0, 0.0));
    if (std::abs(f1) < 1e-12)
        fail(ErrorCode::DegenerateNormalization, "|f(1)| below 1e-12");
    auto copy = std::make_shared<NormalSolutionField>(f);
    return [f1, copy](Complex z) { return copy->eval(z) / f1; };
}

DistortionReport distortion_report(const NormalSolutionField& f, const BeltramiField& mu,
                                   double p) {
    if (p <= 2.0) fail(ErrorCode::InvalidArgument, "p must exceed 2");
    DistortionReport rep;
    const double k = mu.sup_bound;
    if (k == 0.0) return rep;
    const double a = 1.0 - 2.0 / p;
    const int n = f.f_nodes.n();
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const Complex zeta = f.f_nodes.point(ix, iy);
            const Complex fz = f.f_nodes.at(ix, iy);
            const double az = std::abs(zeta);
            const double af = std::abs(fz);
            if (az > 1e-9)
                rep.a_emp = std::max(rep.a_emp, std::abs(fz - zeta) / (k * std::pow(az, a)));
            if (af > 1e-9)
                rep.b_emp = std::max(rep.b_emp, std::max(0.0, (az - af) / (k * std::pow(af, a))));
        }
    return rep;
}

} // namespace solab
