#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "solab/beltrami.hpp"
#include "solab/series.hpp"

namespace solab {

struct GridSpec {
    Box box;
    int n = 256;
    double support_truncation = 1e-8;  // eps_supp: compact support enforcement
};

// Coefficient on the cylinder (baseleaf coordinates x + iy).  The x-period is a
// rational multiple of 2 pi, or absent for limit-periodic coefficients.
struct CylinderCoefficient {
    std::function<Complex(double, double)> eval;
    std::optional<Rational> period_over_two_pi;  // nullopt == LIMIT_PERIODIC
    double sup_bound = 0.0;                      // declared k < 1
    double vertical_decay = 1.0;                 // Y with |value| < eps beyond |y| > Y
};

// Compatible residue sequence (r_i mod n_i): a finite-level truncation of an
// adelic integer along the chain.
struct ProfiniteAddress {
    DivisibilityChain chain;
    std::vector<std::int64_t> residues;

    ProfiniteAddress(DivisibilityChain c, std::vector<std::int64_t> r);
    static ProfiniteAddress from_integer(const DivisibilityChain& c, std::int64_t value);
    ProfiniteAddress truncated(std::size_t levels) const;
};

// Plane coefficient mu_n at level n from a 2 pi n - periodic cylinder coefficient,
// under pi_n(nu(z)) = exp(i z / n):  mu_n(w) = -(w/|w|)^2 mu(n arg w, -n ln|w|).
BeltramiField cylinder_to_plane(const CylinderCoefficient& mu, std::int64_t level,
                                const GridSpec& spec);

// Chain-indexed family of plane-level coefficients with increment accounting.
struct PeriodicBeltramiFamily {
    DivisibilityChain chain;
    std::vector<CylinderCoefficient> cylinder_levels;  // periodized coefficient per level
    std::vector<BeltramiField> levels;                 // plane field at its own level
    std::vector<double> increments;  // sampled ||mu_{n_{i+1}} - mu_{n_i}||_inf, size I-1
    double base_sup = 0.0;           // sampled ||mu_{n_1}||_inf

    PeriodicBeltramiFamily(DivisibilityChain c) : chain(std::move(c)) {}
};

// Periodize a limit-periodic coefficient over [0, 2 pi n_i) at every chain level.
PeriodicBeltramiFamily build_periodic_approximants(const CylinderCoefficient& mu,
                                                   const DivisibilityChain& chain,
                                                   const GridSpec& spec);

// Family from explicit per-level cylinder coefficients (synthetic towers).
PeriodicBeltramiFamily family_from_levels(const DivisibilityChain& chain,
                                          std::vector<CylinderCoefficient> levels,
                                          const GridSpec& spec);

// n_1 ||mu_{n_1}||_inf + sum_i n_{i+1} ||mu_{n_{i+1}} - mu_{n_i}||_inf.
double mu_s_norm(const PeriodicBeltramiFamily& family);

// mu_n^{L}(z) = mu_n(z^m) (zbar/z)^{m-1}, m = L/n; modulus preserved pointwise.
BeltramiField coefficient_pullback(const BeltramiField& mu_n, std::int64_t n, std::int64_t L,
                                   const std::optional<GridSpec>& target = std::nullopt);

// Relative coefficient of the map factor between two solutions at the same level:
// pointwise (mu_hi - mu_lo)/(1 - mu_hi conj(mu_lo)), transported along f_lo.
BeltramiField relative_coefficient(const BeltramiField& mu_hi, const BeltramiField& mu_lo,
                                   const NormalSolutionField& f_lo,
                                   const std::optional<GridSpec>& target = std::nullopt);

// Evaluation table of pi_L(f_hat_{n_i}(x)) over sample points (deepest-level
// plane coordinates w) and chain levels i = J..I-1, with successive diffs.
struct TowerRun {
    DivisibilityChain chain;
    std::size_t start_index = 0;   // J, 0-based
    std::int64_t target_level = 1; // L = n_J
    std::vector<Complex> points;   // w at the deepest level n_I
    std::vector<std::vector<Complex>> table;  // row r: level chain[J+r]
    std::vector<double> diffs;                // max over points |row[r+1] - row[r]|
    std::vector<Complex> leaf_value0;         // per row: conjugated leaf value at z=0
    std::vector<Complex> leaf_value1;         // per row: conjugated leaf value at z=1
    std::vector<int> iterations;

    TowerRun(DivisibilityChain c) : chain(std::move(c)) {}
};

struct TowerSolveParams {
    double tol = 1e-10;
    int max_iter = 400;
};

TowerRun tower_solve(const PeriodicBeltramiFamily& family, std::size_t start_index,
                     const std::vector<Complex>& points, const TowerSolveParams& params = {});

struct TowerDiagnostics {
    std::vector<double> ratio_a_ml;  // per diff: empirical A' M_L
    std::vector<double> growth_ml;   // per row: empirical M_L (growth ratio)
    std::vector<double> reverse_b;   // per row: empirical reverse-bound constant
    bool cauchy = false;
};

// Cauchy when the diff envelope decays: last diff <= 0.5 * peak diff (or all
// diffs negligible).
TowerDiagnostics cauchy_diagnostics(const TowerRun& run, const PeriodicBeltramiFamily& family);

struct AffineRenormalization {
    std::vector<Complex> a;  // a_i = value(1) - value(0)
    std::vector<Complex> b;  // b_i = value(0)
    Complex a_limit{0.0, 0.0};
    Complex b_limit{0.0, 0.0};
    bool degenerate = false;  // some |a_i| < 1e-10
    bool stabilized = false;  // a_i settles away from zero
};

AffineRenormalization affine_renormalize(const TowerRun& run);

// Compact-support split through the Mobius inversion: mu1 = mu restricted to
// |z| >= R solved after pullback by 1/z, mu2 the transported remainder, and
// the composed map f2 o f1 solving the full coefficient.
struct MobiusSplit {
    BeltramiField mu1_pulled;  // gamma^*(mu1) on the inner grid
    NormalSolutionField g;     // normal solution of mu1_pulled
    std::function<Complex(Complex)> f1;
    BeltramiField mu2;
    NormalSolutionField f2;
    std::function<Complex(Complex)> composed;
    bool mu1_trivial = false;
    bool mu2_trivial = false;
};

MobiusSplit mobius_support_split(const std::function<Complex(Complex)>& mu, double sup_bound,
                                 double split_radius, const GridSpec& inner_spec,
                                 const GridSpec& outer_spec, double tol = 1e-10,
                                 int max_iter = 400);

} // namespace solab
