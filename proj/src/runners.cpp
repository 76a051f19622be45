#include "solab/runners.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "solab/counterexamples.hpp"
#include "solab/diophantine.hpp"
#include "solab/tower.hpp"

namespace solab {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kE = 2.718281828459045235360287471353;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

double require_number(const json& cfg, const std::string& key) {
    if (!cfg.contains(key) || !cfg[key].is_number())
        fail(ErrorCode::ParseError, "config field '" + key + "' must be a number");
    return cfg[key].get<double>();
}

double number_or(const json& cfg, const std::string& key, double fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg[key].is_number())
        fail(ErrorCode::ParseError, "config field '" + key + "' must be a number");
    return cfg[key].get<double>();
}

std::int64_t integer_or(const json& cfg, const std::string& key, std::int64_t fallback) {
    if (!cfg.contains(key)) return fallback;
    if (!cfg[key].is_number_integer())
        fail(ErrorCode::ParseError, "config field '" + key + "' must be an integer");
    return cfg[key].get<std::int64_t>();
}

std::uint64_t require_seed(const json& cfg) {
    if (!cfg.contains("seed") || !cfg["seed"].is_number_integer() ||
        (cfg["seed"].is_number_integer() && !cfg["seed"].is_number_unsigned() &&
         cfg["seed"].get<std::int64_t>() < 0))
        fail(ErrorCode::ParseError, "config field 'seed' (nonnegative integer) is mandatory");
    return cfg["seed"].get<std::uint64_t>();
}

std::vector<double> require_vector(const json& cfg, const std::string& key) {
    if (!cfg.contains(key) || !cfg[key].is_array() || cfg[key].empty())
        fail(ErrorCode::ParseError, "config field '" + key + "' must be a nonempty array");
    std::vector<double> out;
    for (const auto& v : cfg[key]) {
        if (!v.is_number()) fail(ErrorCode::ParseError, "config field '" + key + "' must be numeric");
        out.push_back(v.get<double>());
    }
    return out;
}

DivisibilityChain parse_chain(const json& cfg) {
    if (!cfg.contains("chain") || !cfg["chain"].is_array())
        fail(ErrorCode::ParseError, "config field 'chain' must be an array of levels");
    std::vector<std::int64_t> entries;
    for (const auto& v : cfg["chain"]) {
        if (!v.is_number_integer()) fail(ErrorCode::ParseError, "chain entries must be integers");
        entries.push_back(v.get<std::int64_t>());
    }
    return DivisibilityChain(entries);
}

// Mode (1,...,1)/den scaled per the factorial counterexample structure.
RationalMode diagonal_mode(int dim, std::int64_t num, std::int64_t den) {
    RationalMode m;
    for (int j = 0; j < dim; ++j) m.entries.emplace_back(num, den);
    return m;
}

PontryaginSeries build_series(const json& spec, int dimension) {
    if (spec.is_object() && spec.contains("builtin")) {
        const std::string kind = spec["builtin"].get<std::string>();
        if (kind == "single_mode") {
            PontryaginSeries g(dimension);
            g.set_coefficient(diagonal_mode(dimension, 1, 1), Complex(1.0, 0.0));
            return g;
        }
        if (kind == "counterexample") {
            const int terms = static_cast<int>(integer_or(spec, "terms", 6));
            PontryaginSeries g(dimension);
            double fact = 1.0;
            std::int64_t fact_i = 1;
            for (int i = 1; i <= terms; ++i) {
                fact *= i;
                fact_i *= i;
                const double c = 1.0 / (2.0 * fact);
                g.add_coefficient(diagonal_mode(dimension, 1, fact_i), Complex(c, 0.0));
                g.add_coefficient(diagonal_mode(dimension, -1, fact_i), Complex(c, 0.0));
            }
            return g;
        }
        fail(ErrorCode::ParseError, "unknown builtin series '" + kind + "'");
    }
    if (spec.is_object() && spec.contains("file")) {
        std::ifstream in(spec["file"].get<std::string>());
        if (!in) fail(ErrorCode::IoError, "cannot open series file");
        std::stringstream ss;
        ss << in.rdbuf();
        return PontryaginSeries::from_json(ss.str());
    }
    return PontryaginSeries::from_json(spec.dump());
}

json complex_json(Complex v) { return json::array({v.real(), v.imag()}); }

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::IterationBudgetExceeded:
        case ErrorCode::ContractivityViolated:
            return 2;
        default:
            return 1;
    }
}

// ---------------------------------------------------------------- diophantine

RunResult run_solve_diophantine(const json& cfg) {
    RunResult res;
    const std::vector<double> omega = require_vector(cfg, "omega");
    const int dim = static_cast<int>(omega.size());
    const int exponent = static_cast<int>(integer_or(cfg, "exponent", dim));
    const std::int64_t K = integer_or(cfg, "K", 50);
    double gamma;
    if (cfg.contains("gamma")) {
        gamma = require_number(cfg, "gamma");
    } else {
        const double fraction = number_or(cfg, "gamma_fraction", 0.9);
        gamma = fraction * diophantine_margin(omega, exponent, K).min_value;
    }
    const double rho = number_or(cfg, "rho", 0.1);
    const double delta = number_or(cfg, "delta", 0.05);

    const FrequencyVector fv = certify_diophantine(omega, gamma, exponent, K);
    const PontryaginSeries g = build_series(cfg.value("series", json{{"builtin", "single_mode"}}), dim);
    const DivisibilityChain chain =
        cfg.contains("chain") ? parse_chain(cfg)
                              : DivisibilityChain(std::vector<std::int64_t>{g.series_level()});
    const ConvergenceProfile profile = convergence_profile(g, fv, chain, rho, delta);

    res.report["omega"] = omega;
    res.report["gamma"] = gamma;
    res.report["K"] = K;
    res.report["exponent"] = exponent;
    res.report["rho"] = rho;
    res.report["delta"] = delta;
    res.report["levels"] = json::array();
    std::string csv = "n_i,increment,bound_term\n";
    for (const auto& row : profile.rows) {
        res.report["levels"].push_back(
            {{"n_i", row.level}, {"increment", row.increment}, {"bound_term", row.bound_term}});
        char line[128];
        std::snprintf(line, sizeof(line), "%lld,%.17g,%.17g\n",
                      static_cast<long long>(row.level), row.increment, row.bound_term);
        csv += line;
    }
    res.report["verdict"] = verdict_name(profile.verdict);
    res.report["residual"] = profile.residual;
    res.exit_code = profile.verdict == ConvergenceVerdict::Convergent ? 0 : 2;
    res.csv_files.emplace_back("levels.csv", csv);
    return res;
}

RunResult run_s_norm(const json& cfg) {
    RunResult res;
    if (!cfg.contains("series")) fail(ErrorCode::ParseError, "config field 'series' is required");
    const int dim = static_cast<int>(integer_or(cfg, "dimension", 1));
    const PontryaginSeries g = build_series(cfg["series"], dim);
    const DivisibilityChain chain = parse_chain(cfg);
    const double rho = number_or(cfg, "rho", 0.1);
    const int samples = static_cast<int>(integer_or(cfg, "samples_per_period", 16));

    const StripNormEstimate est = strip_norm(g, rho, samples);
    res.report["dimension"] = g.dimension();
    res.report["series_level"] = g.series_level();
    res.report["mode_count"] = g.mode_count();
    res.report["rho"] = rho;
    res.report["strip_norm"] = {{"sampled_lower", est.sampled_lower},
                                {"majorant_upper", est.majorant_upper}};
    res.report["s_norm"] = s_norm(g, chain, rho);
    res.report["chain"] = cfg["chain"];
    return res;
}

// ------------------------------------------------------------------ beltrami

} // namespace

std::function<Complex(Complex)> builtin_mu_evaluator(const nlohmann::json& spec,
                                                     double& sup_hint) {
    const std::string kind = spec.value("kind", "radial_stretch");
    if (kind == "radial_stretch") {
        const double c = spec.value("c", 1.0 / 3.0);
        const double radius = spec.value("radius", 1.0);
        sup_hint = c;
        return [c, radius](Complex z) -> Complex {
            const double r = std::abs(z);
            if (r >= radius || r == 0.0) return Complex(0.0, 0.0);
            return c * z / std::conj(z);
        };
    }
    if (kind == "disk") {
        const double re = spec.value("re", 0.3);
        const double im = spec.value("im", 0.0);
        const double radius = spec.value("radius", 1.0);
        sup_hint = std::abs(Complex(re, im));
        return [re, im, radius](Complex z) -> Complex {
            return std::abs(z) < radius ? Complex(re, im) : Complex(0.0, 0.0);
        };
    }
    if (kind == "counterexample_windowed") {
        const int terms = spec.value("terms", 20);
        const double wx = spec.value("window_x", 10.0 * M_PI);
        const double wy = spec.value("window_y", 5.0);
        const double taper = spec.value("taper", 0.15);  // relative smooth roll-off width
        sup_hint = (kE - 1.0) / (kE + 1.0);
        auto window1d = [taper](double u, double w) -> double {
            const double a = std::abs(u);
            if (a >= w) return 0.0;
            const double flat = w * (1.0 - taper);
            if (a <= flat) return 1.0;
            const double t = (a - flat) / (w - flat);
            return 0.5 * (1.0 + std::cos(M_PI * t));
        };
        return [terms, wx, wy, window1d](Complex z) -> Complex {
            const double win = window1d(z.real(), wx) * window1d(z.imag(), wy);
            if (win == 0.0) return Complex(0.0, 0.0);
            return win * eval_mu_counterexample(z, terms);
        };
    }
    if (kind == "ring_and_tail") {
        // Unbounded-support coefficient with two pieces separated by a gap at
        // the split circle: a Gaussian ring inside and an O(|z|^-2) tail
        // starting beyond it.  The gap keeps the indicator cut of the Mobius
        // split away from any coefficient mass.
        const double a = spec.value("amplitude", 0.3);
        const double ring_r = spec.value("ring_radius", 0.45);
        const double ring_w = spec.value("ring_width", 0.12);
        const double tail_start = spec.value("tail_start", 1.3);
        const double tail_rise = spec.value("tail_rise", 0.3);
        sup_hint = a;
        return [=](Complex z) -> Complex {
            const double r = std::abs(z);
            if (r == 0.0) return Complex(0.0, 0.0);
            const Complex u = z / r;
            const double dr = (r - ring_r) / ring_w;
            double profile = std::exp(-dr * dr);
            if (r > tail_start) {
                const double t = (r - tail_start) / tail_rise;
                profile += (1.0 - std::exp(-t * t)) * (tail_start / r) * (tail_start / r);
            }
            return a * u * u * profile;
        };
    }
    fail(ErrorCode::ParseError, "unknown mu kind '" + kind + "'");
}

namespace {

Box parse_box(const json& cfg, double default_half_width) {
    Box box;
    box.half_width_x = number_or(cfg, "half_width_x", number_or(cfg, "half_width", default_half_width));
    box.half_width_y = number_or(cfg, "half_width_y", box.half_width_x);
    if (cfg.contains("center"))
        box.center = Complex(cfg["center"][0].get<double>(), cfg["center"][1].get<double>());
    return box;
}

RunResult run_solve_beltrami(const json& cfg) {
    RunResult res;
    const json grid_cfg = cfg.value("grid", json::object());
    const int n = static_cast<int>(integer_or(grid_cfg, "n", 256));
    const Box box = parse_box(grid_cfg, 2.0);
    const double tol = number_or(cfg, "tol", 1e-10);
    const int max_iter = static_cast<int>(integer_or(cfg, "max_iter", 400));
    const double p = number_or(cfg, "p", 4.0);

    double sup_hint = 0.0;
    auto mu_eval = builtin_mu_evaluator(cfg.value("mu", json{{"kind", "radial_stretch"}}), sup_hint);
    BeltramiField mu = make_field(box, n, mu_eval);

    const NormalSolutionField f = solve_normal(mu, tol, max_iter);
    const ResidualReport resid = beltrami_residual(f, mu);
    const DistortionReport dist = distortion_report(f, mu, p);

    double worst_ratio = 0.0;
    for (std::size_t i = 1; i < f.l2_diff_history.size(); ++i)
        if (f.l2_diff_history[i - 1] > 10.0 * tol)
            worst_ratio = std::max(worst_ratio, f.l2_diff_history[i] / f.l2_diff_history[i - 1]);

    res.report["grid_n"] = n;
    res.report["box"] = {{"half_width_x", box.half_width_x}, {"half_width_y", box.half_width_y}};
    res.report["sup_mu"] = mu.sup_bound;
    res.report["iterations"] = f.iterations;
    res.report["final_diff"] = f.residual;
    res.report["max_contraction_ratio"] = worst_ratio;
    res.report["beltrami_residual"] = resid.max_residual;
    res.report["dilatation_violations"] = resid.dilatation_violations;
    res.report["distortion"] = {{"p", p}, {"A_emp", dist.a_emp}, {"B_emp", dist.b_emp}};
    res.report["f_at_one"] = complex_json(f.eval(Complex(1.0, 0.0)));

    if (cfg.contains("out_grid")) {
        ComplexGrid out(f.f_nodes);
        out.write_binary(cfg["out_grid"].get<std::string>());
        res.report["out_grid"] = cfg["out_grid"];
    }
    if (cfg.contains("out_grid_csv")) {
        f.f_nodes.write_csv(cfg["out_grid_csv"].get<std::string>());
        res.report["out_grid_csv"] = cfg["out_grid_csv"];
    }
    std::string csv = "iteration,diff\n";
    for (std::size_t i = 0; i < f.diff_history.size(); ++i) {
        char line[64];
        std::snprintf(line, sizeof(line), "%zu,%.17g\n", i + 1, f.diff_history[i]);
        csv += line;
    }
    res.csv_files.emplace_back("iterations.csv", csv);
    return res;
}

// --------------------------------------------------------------------- tower

CylinderCoefficient make_cos_level(double base_amplitude,
                                   const std::vector<std::int64_t>& periods,
                                   const std::vector<double>& amplitudes, std::int64_t level,
                                   double sigma) {
    CylinderCoefficient out;
    auto periods_c = periods;
    auto amps_c = amplitudes;
    out.eval = [base_amplitude, periods_c, amps_c, sigma](double x, double y) -> Complex {
        double v = base_amplitude * std::cos(x) * std::exp(-(y / sigma) * (y / sigma));
        for (std::size_t j = 0; j < periods_c.size(); ++j) {
            const double s = sigma * static_cast<double>(periods_c[j]);
            v += amps_c[j] * std::cos(x / static_cast<double>(periods_c[j])) *
                 std::exp(-(y / s) * (y / s));
        }
        return Complex(v, 0.0);
    };
    out.period_over_two_pi = Rational(level);
    double total = std::abs(base_amplitude);
    for (double a : amps_c) total += std::abs(a);
    out.sup_bound = total;
    const double deepest = periods_c.empty() ? 1.0 : static_cast<double>(periods_c.back());
    out.vertical_decay = 4.3 * sigma * deepest;
    return out;
}

PeriodicBeltramiFamily build_family(const json& spec, const DivisibilityChain& chain,
                                    const GridSpec& grid) {
    const std::string kind = spec.value("kind", "geometric");
    const double sigma = spec.value("sigma", 0.2);
    // Stationary towers carry the same nonzero coefficient at every level; the
    // increment-driven kinds keep the base clean so deep-level renderings of a
    // period-one term do not dominate the grid budget.
    const double base = spec.value("base_amplitude", kind == "stationary" ? 0.1 : 0.0);

    if (kind == "counterexample") {
        CylinderCoefficient mu;
        const int terms = spec.value("terms", 6);
        mu.eval = [terms](double x, double y) { return eval_mu_counterexample(Complex(x, y), terms); };
        mu.period_over_two_pi = std::nullopt;  // limit periodic
        mu.sup_bound = (kE - 1.0) / (kE + 1.0);
        double fact = 1.0;
        for (int i = 2; i <= terms; ++i) fact *= i;
        mu.vertical_decay = spec.value("vertical_decay", 4.3 * fact);
        return build_periodic_approximants(mu, chain, grid);
    }

    std::vector<CylinderCoefficient> levels;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        std::vector<std::int64_t> periods;
        std::vector<double> amps;
        for (std::size_t j = 1; j <= i; ++j) {
            const std::int64_t nj = chain.entries[j];
            double target;  // n_{j} * ||increment_{j-1}||
            if (kind == "stationary")
                target = 0.0;
            else if (kind == "constant")
                target = spec.value("increment_product", 0.1);
            else if (kind == "geometric")
                target = spec.value("increment_product", 0.1) *
                         std::pow(spec.value("decay", 0.5), static_cast<double>(j));
            else
                fail(ErrorCode::ParseError, "unknown family kind '" + kind + "'");
            periods.push_back(nj);
            amps.push_back(target / static_cast<double>(nj));
        }
        levels.push_back(make_cos_level(base, periods, amps, chain.entries[i], sigma));
    }
    return family_from_levels(chain, std::move(levels), grid);
}

RunResult run_tower(const json& cfg) {
    RunResult res;
    const DivisibilityChain chain = parse_chain(cfg);
    const json grid_cfg = cfg.value("grid", json::object());
    GridSpec grid;
    grid.n = static_cast<int>(integer_or(grid_cfg, "n", 256));
    grid.box = parse_box(grid_cfg, 5.0);
    grid.support_truncation = number_or(grid_cfg, "support_truncation", 1e-8);

    const PeriodicBeltramiFamily family = build_family(cfg.value("family", json::object()), chain, grid);

    const double s_norm_value = mu_s_norm(family);
    const double s_norm_threshold = number_or(cfg, "s_norm_threshold", 10.0);

    std::vector<Complex> points;
    const json pts_cfg = cfg.value("points", json{{"ring", {{"radius", 1.02}, {"count", 16}}}});
    if (pts_cfg.is_array()) {
        for (const auto& p : pts_cfg) points.emplace_back(p[0].get<double>(), p[1].get<double>());
    } else {
        const json ring = pts_cfg.value("ring", json::object());
        const double radius = ring.value("radius", 1.02);
        const int count = ring.value("count", 16);
        const double phase = ring.value("phase", 0.1);
        for (int i = 0; i < count; ++i) {
            const double theta = phase + kTwoPi * i / count;
            points.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
        }
    }

    TowerSolveParams params;
    params.tol = number_or(cfg, "tol", 1e-10);
    params.max_iter = static_cast<int>(integer_or(cfg, "max_iter", 400));
    const std::size_t start = static_cast<std::size_t>(integer_or(cfg, "start_index", 0));

    const TowerRun run = tower_solve(family, start, points, params);
    const TowerDiagnostics diag = cauchy_diagnostics(run, family);
    const AffineRenormalization affine = affine_renormalize(run);

    res.report["chain"] = cfg["chain"];
    res.report["L"] = run.target_level;
    res.report["s_norm"] = s_norm_value;
    res.report["s_norm_threshold"] = s_norm_threshold;
    res.report["points"] = json::array();
    for (const auto& w : points) res.report["points"].push_back(complex_json(w));
    res.report["table"] = json::array();
    for (const auto& row : run.table) {
        json jrow = json::array();
        for (const auto& v : row) jrow.push_back(complex_json(v));
        res.report["table"].push_back(jrow);
    }
    res.report["diffs"] = run.diffs;
    res.report["increments"] = family.increments;
    double a_ml = 0.0, m_l = 0.0;
    for (double r : diag.ratio_a_ml) a_ml = std::max(a_ml, r);
    for (double g : diag.growth_ml) m_l = std::max(m_l, g);
    res.report["constants"] = {{"A_prime_ML", a_ml},
                               {"M_L", m_l},
                               {"A_prime_ML_per_level", diag.ratio_a_ml},
                               {"M_L_per_level", diag.growth_ml},
                               {"reverse_B_per_level", diag.reverse_b}};
    res.report["affine"] = json::object();
    res.report["affine"]["a"] = json::array();
    res.report["affine"]["b"] = json::array();
    for (std::size_t i = 0; i < affine.a.size(); ++i) {
        res.report["affine"]["a"].push_back(complex_json(affine.a[i]));
        res.report["affine"]["b"].push_back(complex_json(affine.b[i]));
    }
    res.report["affine"]["a_limit"] = complex_json(affine.a_limit);
    res.report["affine"]["b_limit"] = complex_json(affine.b_limit);
    res.report["affine"]["degenerate"] = affine.degenerate;
    res.report["affine"]["stabilized"] = affine.stabilized;
    res.report["iterations"] = run.iterations;

    const bool sn_ok = s_norm_value <= s_norm_threshold;
    res.report["s_norm_within_threshold"] = sn_ok;
    res.report["verdict"] = diag.cauchy ? "CAUCHY" : "NOT_CAUCHY";
    res.exit_code = (diag.cauchy && sn_ok) ? 0 : 2;

    std::string csv = "level,diff,increment,bound_scale\n";
    for (std::size_t r = 0; r < run.diffs.size(); ++r) {
        const std::size_t i = start + r;
        char line[160];
        std::snprintf(line, sizeof(line), "%lld,%.17g,%.17g,%.17g\n",
                      static_cast<long long>(chain.entries[i + 1]), run.diffs[r],
                      family.increments[i],
                      static_cast<double>(chain.entries[i + 1]) * family.increments[i]);
        csv += line;
    }
    res.csv_files.emplace_back("diffs.csv", csv);
    return res;
}

// ------------------------------------------------------------- counterexample

RunResult run_counterexample(const json& cfg) {
    RunResult res;
    const std::uint64_t seed = require_seed(cfg);
    const int terms = static_cast<int>(integer_or(cfg, "terms", 20));
    const int grid_n = static_cast<int>(integer_or(cfg, "grid_n", 256));
    const double h = number_or(cfg, "h", 1e-5);
    const json box_cfg = cfg.value("box", json::object());
    Box box = parse_box(box_cfg, 10.0 * M_PI);
    if (!box_cfg.contains("half_width_y") && !box_cfg.contains("half_width"))
        box.half_width_y = 5.0;
    const std::int64_t samples = integer_or(cfg, "samples", 100000);

    const double identity_tol = number_or(cfg, "identity_tol", 1e-6);
    const double bound_margin = number_or(cfg, "bound_margin", 1e-9);
    const double fixed_tail_tol = number_or(cfg, "fixed_tail_tol", 1e-12);
    const double moving_tail_min = number_or(cfg, "moving_tail_min", 0.9 / (2.0 * kE));

    // Check 1: closed-form Beltrami identity by finite differences.
    const double residual = verify_beltrami_identity(terms, box, grid_n, h);
    const bool identity_ok = residual < identity_tol;

    // Check 2: strict sup bound (e-1)/(e+1) on random samples.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.center.real() - box.half_width_x,
                                              box.center.real() + box.half_width_x);
    std::uniform_real_distribution<double> uy(box.center.imag() - box.half_width_y,
                                              box.center.imag() + box.half_width_y);
    double sup_sample = 0.0;
    for (std::int64_t i = 0; i < samples; ++i)
        sup_sample = std::max(sup_sample,
                              std::abs(eval_mu_counterexample(Complex(ux(rng), uy(rng)), terms)));
    const double bound = mu_counterexample_bound();
    const bool bound_ok = sup_sample <= bound - bound_margin;

    // Check 3: locally-uniform-but-not-uniform tails.
    const int n_from = static_cast<int>(integer_or(cfg, "n_from", 1));
    const int n_to = static_cast<int>(integer_or(cfg, "n_to", 20));
    const double x_range = number_or(cfg, "x_range", 1.0);
    const int moving_max_level = static_cast<int>(integer_or(cfg, "moving_max_level", 12));
    const auto rows = tail_sup_profile(TailKind::Beltrami, n_from, n_to, x_range);
    bool tails_ok = true;
    double final_fixed = 0.0;
    for (const auto& row : rows) {
        if (row.tail_start == n_to) final_fixed = row.fixed_tail_sup;
        if (row.tail_start <= moving_max_level && row.moving_tail_sup < moving_tail_min)
            tails_ok = false;
    }
    if (final_fixed >= fixed_tail_tol) tails_ok = false;

    res.report["terms"] = terms;
    res.report["grid_n"] = grid_n;
    res.report["h"] = h;
    res.report["box"] = {{"half_width_x", box.half_width_x}, {"half_width_y", box.half_width_y}};
    res.report["samples"] = samples;
    res.report["checks"] = {
        {"identity",
         {{"residual", residual}, {"tolerance", identity_tol}, {"pass", identity_ok}}},
        {"norm_bound",
         {{"sampled_sup", sup_sample},
          {"bound", bound},
          {"margin", bound_margin},
          {"pass", bound_ok}}},
        {"tails",
         {{"final_fixed_tail", final_fixed},
          {"fixed_tolerance", fixed_tail_tol},
          {"moving_min", moving_tail_min},
          {"pass", tails_ok}}}};
    res.exit_code = (identity_ok && bound_ok && tails_ok) ? 0 : 2;

    std::string tail_csv = "N,fixed_tail_sup,moving_tail_sup,single_term_sup\n";
    for (const auto& row : rows) {
        char line[160];
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g\n", row.tail_start,
                      row.fixed_tail_sup, row.moving_tail_sup, row.single_term_sup);
        tail_csv += line;
    }
    res.csv_files.emplace_back("tails.csv", tail_csv);

    // Residual map on a coarse subgrid for plotting.
    std::string map_csv = "x,y,residual\n";
    ComplexGrid coarse(box, 64);
    for (int iy = 0; iy < 64; iy += 1)
        for (int ix = 0; ix < 64; ix += 1) {
            const Complex z = coarse.point(ix, iy);
            const Complex wx = (eval_w_mu(z + Complex(h, 0), terms) -
                                eval_w_mu(z - Complex(h, 0), terms)) / (2.0 * h);
            const Complex wy = (eval_w_mu(z + Complex(0, h), terms) -
                                eval_w_mu(z - Complex(0, h), terms)) / (2.0 * h);
            const Complex wz = 0.5 * (wx - Complex(0.0, 1.0) * wy);
            const Complex wzb = 0.5 * (wx + Complex(0.0, 1.0) * wy);
            const double r = std::abs(wzb - eval_mu_counterexample(z, terms) * wz);
            char line[160];
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", z.real(), z.imag(), r);
            map_csv += line;
        }
    res.csv_files.emplace_back("residual_map.csv", map_csv);
    return res;
}

// ----------------------------------------------------------------- split-solve

RunResult run_split_solve(const json& cfg) {
    RunResult res;
    double sup_hint = 0.0;
    auto mu_eval = builtin_mu_evaluator(cfg.value("mu", json{{"kind", "ring_and_tail"}}), sup_hint);
    const double R = number_or(cfg, "split_radius", 1.0);
    const double tol = number_or(cfg, "tol", 1e-9);
    const int max_iter = static_cast<int>(integer_or(cfg, "max_iter", 400));

    GridSpec inner;
    const json inner_cfg = cfg.value("inner_grid", json::object());
    inner.n = static_cast<int>(integer_or(inner_cfg, "n", 256));
    inner.box = parse_box(inner_cfg, 2.5 / R);
    GridSpec outer;
    const json outer_cfg = cfg.value("outer_grid", json::object());
    outer.n = static_cast<int>(integer_or(outer_cfg, "n", 256));
    outer.box = parse_box(outer_cfg, 2.5 * R);

    const MobiusSplit split = mobius_support_split(mu_eval, sup_hint, R, inner, outer, tol, max_iter);

    const json res_cfg = cfg.value("residual_grid", json::object());
    const int res_n = static_cast<int>(integer_or(res_cfg, "n", 256));
    Box res_box = parse_box(res_cfg, 0.8 * outer.box.half_width_x);
    const double res_tol = number_or(cfg, "residual_tol", 5e-2);

    const ResidualReport rep = residual_on_grid(split.composed, mu_eval, res_box, res_n, sup_hint);

    res.report["split_radius"] = R;
    res.report["mu1_trivial"] = split.mu1_trivial;
    res.report["mu2_trivial"] = split.mu2_trivial;
    res.report["sup_mu1_pulled"] = split.mu1_pulled.sup_bound;
    res.report["sup_mu2"] = split.mu2.sup_bound;
    res.report["iterations_g"] = split.g.iterations;
    res.report["iterations_f2"] = split.f2.iterations;
    res.report["composed_residual"] = rep.max_residual;
    res.report["residual_tol"] = res_tol;
    res.exit_code = rep.max_residual < res_tol ? 0 : 2;
    return res;
}

} // namespace

nlohmann::json parse_config_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::ParseError, std::string("config JSON: ") + e.what());
    }
}

RunResult run_command(const std::string& command, const nlohmann::json& config) {
    RunResult res;
    try {
        if (!config.is_object()) fail(ErrorCode::ParseError, "config must be a JSON object");
        if (command == "solve-diophantine")
            res = run_solve_diophantine(config);
        else if (command == "s-norm")
            res = run_s_norm(config);
        else if (command == "solve-beltrami")
            res = run_solve_beltrami(config);
        else if (command == "tower")
            res = run_tower(config);
        else if (command == "counterexample")
            res = run_counterexample(config);
        else if (command == "split-solve")
            res = run_split_solve(config);
        else
            fail(ErrorCode::ParseError, "unknown command '" + command + "'");
    } catch (const Error& e) {
        res.report["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
        res.exit_code = exit_code_for(e);
    } catch (const std::exception& e) {
        res.report["error"] = {{"code", "Internal"}, {"message", e.what()}};
        res.exit_code = 1;
    }
    res.report["command"] = command;
    if (config.is_object() && config.contains("seed")) res.report["seed"] = config["seed"];
    res.report["timestamp"] = utc_timestamp();
    return res;
}

std::string report_to_text(const nlohmann::json& report) { return report.dump(2) + "\n"; }

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::IoError, "cannot open " + tmp);
        out << content;
        if (!out) fail(ErrorCode::IoError, "write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail(ErrorCode::IoError, "rename failed for " + path + ": " + ec.message());
}

std::string write_outputs(const RunResult& result, const std::string& out_dir,
                          const std::string& base_name, bool want_json, bool want_csv) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir);
    std::string report_path;
    if (want_json) {
        report_path = out_dir + "/" + base_name + ".json";
        write_file_atomic(report_path, report_to_text(result.report));
    }
    if (want_csv)
        for (const auto& [name, content] : result.csv_files)
            write_file_atomic(out_dir + "/" + base_name + "_" + name, content);
    return report_path;
}

} // namespace solab
