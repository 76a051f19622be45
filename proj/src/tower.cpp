#include "solab/tower.hpp"

#include <cmath>
#include <memory>

namespace solab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Complex integer_power(Complex z, std::int64_t e) {
    Complex acc(1.0, 0.0);
    Complex base = z;
    std::int64_t k = e;
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

double wrap_into_period(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    return r;
}

// Sampled cylinder sup of |f| over x in [0, 2 pi span), |y| <= y_max.
double sampled_cylinder_sup(const std::function<Complex(double, double)>& f, double span_units,
                            double y_max, int x_per_unit = 64, int y_samples = 33) {
    const double x_hi = kTwoPi * span_units;
    const int nx = std::max(8, static_cast<int>(std::ceil(span_units * x_per_unit)));
    double best = 0.0;
    for (int iy = 0; iy < y_samples; ++iy) {
        const double y = y_samples == 1 ? 0.0 : -y_max + 2.0 * y_max * iy / (y_samples - 1);
        for (int ix = 0; ix < nx; ++ix) {
            const double x = x_hi * ix / nx;
            best = std::max(best, std::abs(f(x, y)));
        }
    }
    return best;
}

void validate_periodic_tag(const CylinderCoefficient& mu) {
    if (!mu.period_over_two_pi) return;
    const double period = kTwoPi * mu.period_over_two_pi->to_double();
    const double pts[][2] = {{0.1, 0.0}, {1.3, 0.4}, {2.9, -0.7}, {0.77, 1.1}};
    for (const auto& p : pts) {
        const Complex a = mu.eval(p[0], p[1]);
        const Complex b = mu.eval(p[0] + period, p[1]);
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
            fail(ErrorCode::InvalidArgument, "declared x-period is inconsistent with the evaluator");
    }
}

} // namespace

ProfiniteAddress::ProfiniteAddress(DivisibilityChain c, std::vector<std::int64_t> r)
    : chain(std::move(c)), residues(std::move(r)) {
    if (residues.size() != chain.size())
        fail(ErrorCode::InvalidArgument, "address needs one residue per chain level");
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (residues[i] < 0 || residues[i] >= chain.entries[i])
            fail(ErrorCode::InvalidArgument, "residue out of range at level " + std::to_string(i));
        if (i + 1 < residues.size() && (residues[i + 1] - residues[i]) % chain.entries[i] != 0)
            fail(ErrorCode::InvalidArgument,
                 "incompatible residues: r_{i+1} != r_i (mod n_i) at level " + std::to_string(i));
    }
}

ProfiniteAddress ProfiniteAddress::from_integer(const DivisibilityChain& c, std::int64_t value) {
    std::vector<std::int64_t> r;
    for (std::int64_t n : c.entries) {
        std::int64_t m = value % n;
        if (m < 0) m += n;
        r.push_back(m);
    }
    return ProfiniteAddress(c, std::move(r));
}

ProfiniteAddress ProfiniteAddress::truncated(std::size_t levels) const {
    if (levels == 0 || levels > chain.size())
        fail(ErrorCode::InvalidArgument, "bad truncation depth");
    DivisibilityChain c(std::vector<std::int64_t>(chain.entries.begin(),
                                                  chain.entries.begin() + levels));
    return ProfiniteAddress(std::move(c),
                            std::vector<std::int64_t>(residues.begin(), residues.begin() + levels));
}

BeltramiField cylinder_to_plane(const CylinderCoefficient& mu, std::int64_t level,
                                const GridSpec& spec) {
    if (level <= 0) fail(ErrorCode::InvalidArgument, "level must be positive");
    if (!mu.period_over_two_pi)
        fail(ErrorCode::InvalidArgument,
             "cylinder_to_plane requires an exactly periodic coefficient (got LIMIT_PERIODIC)");
    // mu must be 2 pi level - periodic: level / declared period integral.
    const Rational ratio = Rational(level) / *mu.period_over_two_pi;
    if (!ratio.is_integer() || ratio.num() <= 0)
        fail(ErrorCode::InvalidArgument, "level " + std::to_string(level) +
                                             " does not match the declared x-period");
    validate_periodic_tag(mu);

    const double n = static_cast<double>(level);
    ComplexGrid grid(spec.box, spec.n);
    grid.fill([&](Complex w) -> Complex {
        const double r = std::abs(w);
        if (r == 0.0) return Complex(0.0, 0.0);
        const double x = n * std::atan2(w.imag(), w.real());
        const double y = -n * std::log(r);
        const Complex v = mu.eval(x, y);
        if (std::abs(v) < spec.support_truncation) return Complex(0.0, 0.0);
        const Complex u = w / r;
        return -(u * u) * v;
    });
    return BeltramiField(std::move(grid));
}

namespace {

CylinderCoefficient periodize(const CylinderCoefficient& mu, std::int64_t level) {
    CylinderCoefficient out;
    const double period = kTwoPi * static_cast<double>(level);
    auto base = mu.eval;
    out.eval = [base, period](double x, double y) {
        return base(wrap_into_period(x, period), y);
    };
    out.period_over_two_pi = Rational(level);
    out.sup_bound = mu.sup_bound;
    out.vertical_decay = mu.vertical_decay;
    return out;
}

void finalize_family(PeriodicBeltramiFamily& fam, const GridSpec& spec) {
    const double y_max = std::max(1.0, fam.cylinder_levels.front().vertical_decay);
    for (std::size_t i = 0; i < fam.cylinder_levels.size(); ++i) {
        fam.levels.push_back(
            cylinder_to_plane(fam.cylinder_levels[i], fam.chain.entries[i], spec));
        if (fam.levels.back().sup_bound >= 1.0)
            fail(ErrorCode::InvalidArgument, "family level has k >= 1");
    }
    fam.base_sup = sampled_cylinder_sup(fam.cylinder_levels.front().eval,
                                        static_cast<double>(fam.chain.entries.front()), y_max);
    for (std::size_t i = 0; i + 1 < fam.cylinder_levels.size(); ++i) {
        auto lo = fam.cylinder_levels[i].eval;
        auto hi = fam.cylinder_levels[i + 1].eval;
        auto diff = [lo, hi](double x, double y) { return hi(x, y) - lo(x, y); };
        const double ymax = std::max(std::max(1.0, fam.cylinder_levels[i].vertical_decay),
                                     fam.cylinder_levels[i + 1].vertical_decay);
        fam.increments.push_back(sampled_cylinder_sup(
            diff, static_cast<double>(fam.chain.entries[i + 1]), ymax));
    }
}

} // namespace

PeriodicBeltramiFamily build_periodic_approximants(const CylinderCoefficient& mu,
                                                   const DivisibilityChain& chain,
                                                   const GridSpec& spec) {
    PeriodicBeltramiFamily fam(chain);
    for (std::int64_t n : chain.entries) fam.cylinder_levels.push_back(periodize(mu, n));
    finalize_family(fam, spec);
    return fam;
}

PeriodicBeltramiFamily family_from_levels(const DivisibilityChain& chain,
                                          std::vector<CylinderCoefficient> levels,
                                          const GridSpec& spec) {
    if (levels.size() != chain.size())
        fail(ErrorCode::InvalidArgument, "need one cylinder coefficient per chain level");
    PeriodicBeltramiFamily fam(chain);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!levels[i].period_over_two_pi)
            fail(ErrorCode::InvalidArgument, "family levels must be periodic");
        fam.cylinder_levels.push_back(std::move(levels[i]));
    }
    finalize_family(fam, spec);
    return fam;
}

double mu_s_norm(const PeriodicBeltramiFamily& family) {
    double total = static_cast<double>(family.chain.entries.front()) * family.base_sup;
    for (std::size_t i = 0; i < family.increments.size(); ++i)
        total += static_cast<double>(family.chain.entries[i + 1]) * family.increments[i];
    return total;
}

BeltramiField coefficient_pullback(const BeltramiField& mu_n, std::int64_t n, std::int64_t L,
                                   const std::optional<GridSpec>& target) {
    if (n <= 0 || L <= 0) fail(ErrorCode::InvalidArgument, "levels must be positive");
    if (L % n != 0)
        fail(ErrorCode::InvalidArgument,
             "L = " + std::to_string(L) + " is not a multiple of n = " + std::to_string(n));
    const std::int64_t m = L / n;
    GridSpec spec;
    if (target) {
        spec = *target;
    } else {
        spec.box = mu_n.grid.box();
        spec.n = mu_n.grid.n();
    }
    ComplexGrid grid(spec.box, spec.n);
    grid.fill([&](Complex z) -> Complex {
        if (z == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
        const Complex zm = integer_power(z, m);
        if (!mu_n.grid.contains(zm)) return Complex(0.0, 0.0);
        const Complex v = mu_n.grid.sample_bicubic(zm);
        return v * integer_power(std::conj(z) / z, m - 1);
    });
    return BeltramiField(std::move(grid));
}

namespace {

// Inverse of a near-identity map by damped fixed point; nullopt when the
// iterate leaves the evaluable region.
std::optional<Complex> invert_map(const std::function<Complex(Complex)>& f, Complex w,
                                  const Box& box, int max_iter = 80, double tol = 1e-12) {
    Complex z = w;
    const double hx = box.half_width_x, hy = box.half_width_y;
    for (int i = 0; i < max_iter; ++i) {
        if (std::abs(z.real() - box.center.real()) > hx || std::abs(z.imag() - box.center.imag()) > hy)
            return std::nullopt;
        const Complex err = f(z) - w;
        if (std::abs(err) < tol) return z;
        z -= err;
    }
    return z;
}

} // namespace

BeltramiField relative_coefficient(const BeltramiField& mu_hi, const BeltramiField& mu_lo,
                                   const NormalSolutionField& f_lo,
                                   const std::optional<GridSpec>& target) {
    const ComplexGrid& ghi = mu_hi.grid;
    const ComplexGrid& glo = mu_lo.grid;
    if (ghi.n() != glo.n() || std::abs(ghi.box().half_width_x - glo.box().half_width_x) > 0.0 ||
        std::abs(ghi.box().half_width_y - glo.box().half_width_y) > 0.0 ||
        ghi.box().center != glo.box().center)
        fail(ErrorCode::InvalidArgument, "relative_coefficient requires matching grids");

    for (int iy = 0; iy < ghi.n(); ++iy)
        for (int ix = 0; ix < ghi.n(); ++ix) {
            const Complex d = 1.0 - ghi.at(ix, iy) * std::conj(glo.at(ix, iy));
            if (std::abs(d) < 1e-9)
                fail(ErrorCode::DenominatorNearZero,
                     "|1 - mu mu_bar| below 1e-9; coefficient inputs corrupted");
        }

    GridSpec spec;
    if (target) {
        spec = *target;
    } else {
        spec.box = ghi.box();
        spec.n = ghi.n();
    }

    // Bilinear sampling keeps convex-combination bounds for the sup estimate.
    auto rhs = [&](Complex z) -> Complex {
        const Complex hi = ghi.contains(z) ? ghi.sample_bilinear(z) : Complex(0, 0);
        const Complex lo = glo.contains(z) ? glo.sample_bilinear(z) : Complex(0, 0);
        return (hi - lo) / (1.0 - hi * std::conj(lo));
    };
    auto fmap = [&](Complex z) { return f_lo.eval(z); };
    const double step = 0.5 * std::min(ghi.dx(), ghi.dy());

    ComplexGrid out(spec.box, spec.n);
    out.fill([&](Complex w) -> Complex {
        const auto z_opt = invert_map(fmap, w, ghi.box());
        if (!z_opt) return Complex(0.0, 0.0);
        const Complex z = *z_opt;
        const Complex r = rhs(z);
        if (r == Complex(0.0, 0.0)) return r;
        // Push-forward phase (f_lo)_z / conj((f_lo)_z), renormalized to unit modulus.
        const Complex fx = (f_lo.eval(z + Complex(step, 0)) - f_lo.eval(z - Complex(step, 0))) /
                           (2.0 * step);
        const Complex fy = (f_lo.eval(z + Complex(0, step)) - f_lo.eval(z - Complex(0, step))) /
                           (2.0 * step);
        const Complex fz = 0.5 * (fx - Complex(0.0, 1.0) * fy);
        if (std::abs(fz) == 0.0) return Complex(0.0, 0.0);
        Complex phase = fz / std::conj(fz);
        phase /= std::abs(phase);
        return r * phase;
    });
    return BeltramiField(std::move(out));
}

TowerRun tower_solve(const PeriodicBeltramiFamily& family, std::size_t start_index,
                     const std::vector<Complex>& points, const TowerSolveParams& params) {
    const std::size_t levels = family.chain.size();
    if (start_index >= levels) fail(ErrorCode::InvalidArgument, "start index beyond chain");
    if (points.empty()) fail(ErrorCode::InvalidArgument, "no sample points");
    if (family.levels.size() != levels)
        fail(ErrorCode::InvalidArgument, "family has no plane fields");

    TowerRun run(family.chain);
    run.start_index = start_index;
    run.target_level = family.chain.entries[start_index];
    run.points = points;
    const std::int64_t deepest = family.chain.entries.back();
    const std::int64_t L = run.target_level;

    for (std::size_t i = start_index; i < levels; ++i) {
        const std::int64_t n_i = family.chain.entries[i];
        NormalSolutionField f;
        try {
            f = solve_normal(family.levels[i], params.tol, params.max_iter);
        } catch (const Error& e) {
            fail(e.code(), "level " + std::to_string(n_i) + ": " + e.what());
        }
        std::vector<Complex> row;
        row.reserve(points.size());
        for (const Complex& w : points) {
            const Complex v = integer_power(w, deepest / n_i);
            if (!f.f_nodes.contains(v))
                fail(ErrorCode::OutOfDomain, "level " + std::to_string(n_i) +
                                                 ": sample point power leaves the solver box");
            row.push_back(integer_power(f.eval(v), n_i / L));
        }
        run.table.push_back(std::move(row));
        run.iterations.push_back(f.iterations);

        // Conjugated leaf values at base points z=0 and z=1:
        // value(z) = -i n Log f(exp(i z / n)).
        const double nd = static_cast<double>(n_i);
        const Complex minus_i_n(0.0, -nd);
        const Complex p0(1.0, 0.0);
        const Complex p1(std::cos(1.0 / nd), std::sin(1.0 / nd));
        run.leaf_value0.push_back(minus_i_n * std::log(f.eval(p0)));
        run.leaf_value1.push_back(minus_i_n * std::log(f.eval(p1)));
    }

    for (std::size_t r = 0; r + 1 < run.table.size(); ++r) {
        double d = 0.0;
        for (std::size_t p = 0; p < points.size(); ++p)
            d = std::max(d, std::abs(run.table[r + 1][p] - run.table[r][p]));
        run.diffs.push_back(d);
    }
    return run;
}

TowerDiagnostics cauchy_diagnostics(const TowerRun& run, const PeriodicBeltramiFamily& family) {
    if (run.table.size() < 2)
        fail(ErrorCode::InvalidArgument, "diagnostics need at least two tower levels");
    TowerDiagnostics diag;
    const std::int64_t deepest = family.chain.entries.back();
    const std::int64_t L = run.target_level;

    std::vector<double> pi_l_mag(run.points.size());
    for (std::size_t p = 0; p < run.points.size(); ++p)
        pi_l_mag[p] = std::abs(integer_power(run.points[p], deepest / L));

    for (std::size_t r = 0; r + 1 < run.table.size(); ++r) {
        const std::size_t i = run.start_index + r;  // diff between chain levels i and i+1
        const double dmu = family.increments[i];
        const double scale = static_cast<double>(family.chain.entries[i + 1]) * dmu /
                             static_cast<double>(L);
        double ratio = 0.0;
        if (scale > 0.0)
            for (std::size_t p = 0; p < run.points.size(); ++p)
                ratio = std::max(ratio, std::abs(run.table[r + 1][p] - run.table[r][p]) /
                                            (scale * std::max(1.0, pi_l_mag[p])));
        diag.ratio_a_ml.push_back(ratio);
    }
    for (std::size_t r = 0; r < run.table.size(); ++r) {
        double g = 0.0, rb = 0.0;
        for (std::size_t p = 0; p < run.points.size(); ++p) {
            g = std::max(g, std::abs(run.table[r][p]) / std::max(1.0, pi_l_mag[p]));
            rb = std::max(rb, pi_l_mag[p] / std::max(1.0, std::abs(run.table[r][p])));
        }
        diag.growth_ml.push_back(g);
        diag.reverse_b.push_back(rb);
    }

    // Diffs at or below the grid-accuracy floor carry no divergence signal.
    double table_scale = 1.0;
    for (const auto& row : run.table)
        for (const auto& v : row) table_scale = std::max(table_scale, std::abs(v));
    double peak = 0.0;
    for (double d : run.diffs) peak = std::max(peak, d);
    const double last = run.diffs.back();
    const double noise_floor = 1e-3 * table_scale;
    diag.cauchy = peak <= noise_floor || last <= 0.5 * peak;
    return diag;
}

AffineRenormalization affine_renormalize(const TowerRun& run) {
    if (run.table.empty()) fail(ErrorCode::InvalidArgument, "empty tower run");
    AffineRenormalization out;
    for (std::size_t r = 0; r < run.leaf_value0.size(); ++r) {
        const Complex b = run.leaf_value0[r];
        const Complex a = run.leaf_value1[r] - run.leaf_value0[r];
        out.a.push_back(a);
        out.b.push_back(b);
        if (std::abs(a) < 1e-10) out.degenerate = true;
    }
    out.a_limit = out.a.back();
    out.b_limit = out.b.back();
    if (out.a.size() >= 2) {
        double peak = 0.0;
        for (std::size_t r = 0; r + 1 < out.a.size(); ++r)
            peak = std::max(peak, std::abs(out.a[r + 1] - out.a[r]));
        const double last = std::abs(out.a.back() - out.a[out.a.size() - 2]);
        const double floor = 1e-3 * std::max(1.0, std::abs(out.a_limit));
        out.stabilized = !out.degenerate && (peak <= floor || last <= 0.5 * peak);
    } else {
        out.stabilized = !out.degenerate;
    }
    return out;
}

MobiusSplit mobius_support_split(const std::function<Complex(Complex)>& mu, double sup_bound,
                                 double split_radius, const GridSpec& inner_spec,
                                 const GridSpec& outer_spec, double tol, int max_iter) {
    if (sup_bound >= 1.0) fail(ErrorCode::InvalidArgument, "coefficient bound k must be < 1");
    if (split_radius <= 0.0) fail(ErrorCode::InvalidArgument, "split radius must be positive");

    MobiusSplit split;

    // gamma^*(mu1)(z) = mu(1/z) (z/zbar)^2 supported in |z| <= 1/R.
    auto mu1_pulled = [&](Complex z) -> Complex {
        if (z == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
        const Complex inv = 1.0 / z;
        if (std::abs(inv) < split_radius) return Complex(0.0, 0.0);
        const Complex u2 = z / std::conj(z);  // z/zbar, unit modulus
        return mu(inv) * u2 * u2;
    };
    split.mu1_pulled = make_field(inner_spec.box, inner_spec.n, mu1_pulled,
                                  inner_spec.support_truncation);
    split.mu1_trivial = split.mu1_pulled.sup_bound == 0.0;
    split.g = solve_normal(split.mu1_pulled, tol, max_iter);

    // Closures own shared copies: the returned struct may be moved around.
    auto g_shared = std::make_shared<NormalSolutionField>(split.g);
    const bool mu1_trivial = split.mu1_trivial;
    split.f1 = [g_shared, mu1_trivial](Complex z) -> Complex {
        if (mu1_trivial) return z;
        if (z == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
        return 1.0 / g_shared->eval_extended(1.0 / z);
    };

    // mu2 on the outer grid: transported remainder (mu - mu1)/(1 - mu conj(mu1)).
    auto rhs = [&](Complex z) -> Complex {
        const Complex m = mu(z);
        const Complex m1 = std::abs(z) >= split_radius ? m : Complex(0.0, 0.0);
        return (m - m1) / (1.0 - m * std::conj(m1));
    };
    const double step = 0.25 * std::min(outer_spec.box.half_width_x, outer_spec.box.half_width_y) /
                        outer_spec.n;
    auto f1_fn = split.f1;
    ComplexGrid mu2_grid(outer_spec.box, outer_spec.n);
    mu2_grid.fill([&](Complex w) -> Complex {
        const auto z_opt = invert_map(f1_fn, w, outer_spec.box);
        if (!z_opt) return Complex(0.0, 0.0);
        const Complex z = *z_opt;
        const Complex r = rhs(z);
        if (std::abs(r) < outer_spec.support_truncation) return Complex(0.0, 0.0);
        const Complex fx = (f1_fn(z + Complex(step, 0)) - f1_fn(z - Complex(step, 0))) / (2.0 * step);
        const Complex fy = (f1_fn(z + Complex(0, step)) - f1_fn(z - Complex(0, step))) / (2.0 * step);
        const Complex fz = 0.5 * (fx - Complex(0.0, 1.0) * fy);
        if (std::abs(fz) == 0.0) return Complex(0.0, 0.0);
        Complex phase = fz / std::conj(fz);
        phase /= std::abs(phase);
        return r * phase;
    });
    split.mu2 = BeltramiField(std::move(mu2_grid));
    split.mu2_trivial = split.mu2.sup_bound == 0.0;
    split.f2 = solve_normal(split.mu2, tol, max_iter);

    auto f2_shared = std::make_shared<NormalSolutionField>(split.f2);
    auto f1_copy = split.f1;
    split.composed = [f2_shared, f1_copy](Complex z) { return f2_shared->eval_extended(f1_copy(z)); };
    return split;
}

} // namespace solab
