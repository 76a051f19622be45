#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "solab/rational.hpp"

namespace solab {

using Complex = std::complex<double>;

// A rational frequency vector q with level(q) = lcm of denominators.
struct RationalMode {
    std::vector<Rational> entries;

    bool operator<(const RationalMode& other) const;
    bool operator==(const RationalMode& other) const { return entries == other.entries; }

    std::size_t dimension() const { return entries.size(); }
    bool is_zero() const;
    std::int64_t level() const;
    double l1_norm() const;

    // True iff L*q has integer entries, i.e. q lies in L^{-1} Z^n.
    bool divides_level(std::int64_t L) const;
};

// Finite series  g(z) = sum_q g_q exp(2 pi i q.z)  with exact rational modes.
// Coefficients that are exactly zero are never stored.
class PontryaginSeries {
public:
    explicit PontryaginSeries(int dimension);

    int dimension() const { return dimension_; }
    const std::map<RationalMode, Complex>& terms() const { return terms_; }
    std::size_t mode_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    void set_coefficient(const RationalMode& mode, Complex value);
    void add_coefficient(const RationalMode& mode, Complex value);
    Complex coefficient(const RationalMode& mode) const;
    Complex zero_mode_coefficient() const;

    // lcm over modes of level(q); 1 for the zero series.
    std::int64_t series_level() const;

    Complex evaluate(const std::vector<Complex>& z) const;

    // Directional derivative series  sum_j omega_j d/dz_j: multiplies each
    // coefficient by 2 pi i (omega . q).
    PontryaginSeries directional_derivative(const std::vector<double>& omega) const;

    PontryaginSeries operator+(const PontryaginSeries& other) const;
    PontryaginSeries operator-(const PontryaginSeries& other) const;
    PontryaginSeries scaled(Complex factor) const;

    std::string to_json() const;
    static PontryaginSeries from_json(const std::string& text);

private:
    int dimension_;
    std::map<RationalMode, Complex> terms_;
};

// Strictly increasing chain n_1 | n_2 | ... | n_I.
struct DivisibilityChain {
    std::vector<std::int64_t> entries;

    explicit DivisibilityChain(std::vector<std::int64_t> values);
    std::size_t size() const { return entries.size(); }
    std::int64_t back() const { return entries.back(); }
};

struct StripNormEstimate {
    double rho = 0.0;
    double sampled_lower = 0.0;
    double majorant_upper = 0.0;
};

// Sub-series of modes q in L^{-1} Z^n; coefficients unchanged.
PontryaginSeries level_project(const PontryaginSeries& g, std::int64_t L);

// Modes resolved by `hi` but not by `lo`; equals level_project(g,hi) - level_project(g,lo)
// exactly (mode sets are nested), with no floating cancellation.
PontryaginSeries level_increment(const PontryaginSeries& g, std::int64_t hi, std::int64_t lo);

// Bracketing pair for sup_{||Im z|| < rho} |g|: the l1 coefficient majorant
// sum |g_q| exp(2 pi rho |q|_1) above, a boundary-grid sample maximum below.
StripNormEstimate strip_norm(const PontryaginSeries& g, double rho, int samples_per_period);

double majorant_upper(const PontryaginSeries& g, double rho);

// Chain-weighted norm n_1^{2n+1} U(g_{n_1}) + sum_{i>1} n_i^{2n+1} U(g_{n_i} - g_{n_{i-1}}).
double s_norm(const PontryaginSeries& g, const DivisibilityChain& chain, double rho);

// g o h_a: every mode q replaced by a*q.
PontryaginSeries homothety_conjugate(const PontryaginSeries& g, const Rational& a);

} // namespace solab
