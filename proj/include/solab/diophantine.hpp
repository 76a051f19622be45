#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solab/series.hpp"

namespace solab {

// Frequency vector with a finite-range small-divisor certificate:
// |omega . k| > gamma / |k|_2^exponent checked for all 0 < |k|_2 <= K.
struct FrequencyVector {
    std::vector<double> omega;
    double gamma = 0.0;
    int exponent = 1;
    std::int64_t checked_radius = 0;

    int dimension() const { return static_cast<int>(omega.size()); }
    double dot(const RationalMode& mode) const;
};

struct LatticeScanResult {
    double min_value = 0.0;             // min over lattice of |omega.k| * |k|_2^exponent
    std::vector<std::int64_t> arg_min;  // lexicographically smallest minimizer
};

// Exhaustive scan of the lattice ball 0 < |k|_2 <= K.
LatticeScanResult diophantine_margin(const std::vector<double>& omega, int exponent,
                                     std::int64_t K);

// Certifies omega if min |omega.k| |k|^exponent > gamma over the ball; otherwise
// throws Error(CertificateFailure) naming the violating k in the message.
FrequencyVector certify_diophantine(const std::vector<double>& omega, double gamma,
                                    int exponent, std::int64_t K);

struct DivisorRecord {
    RationalMode mode;
    double divisor = 0.0;     // omega . q
    double bound_used = 0.0;  // gamma / (L |Lq|_2^exponent) when |Lq|_2 <= K, else 0
};

struct SmallDivisorLedger {
    std::vector<DivisorRecord> records;
};

struct CohomologicalSolution {
    PontryaginSeries f;
    SmallDivisorLedger ledger;
};

// Mode-wise inverse  f_q = g_q / (2 pi i (omega.q)).  Requires zero average and
// no divisor within 1e-14 of zero.
CohomologicalSolution solve_cohomological(const PontryaginSeries& g,
                                          const FrequencyVector& omega);

// max over samples of |sum_j omega_j d_j f(z) - g(z)|, derivative exact modewise.
double derivative_residual(const PontryaginSeries& f, const FrequencyVector& omega,
                           const PontryaginSeries& g,
                           const std::vector<std::vector<Complex>>& sample_points);

enum class ConvergenceVerdict { Convergent, Divergent };

struct ProfileRow {
    std::int64_t level = 0;
    double increment = 0.0;   // ||f_{n_i} - f_{n_{i-1}}||_{rho-delta}, majorant flavor
    double bound_term = 0.0;  // n_i^{2n+1} ||g_{n_i} - g_{n_{i-1}}||_rho / (gamma delta^{2n})
};

struct ConvergenceProfile {
    std::vector<ProfileRow> rows;
    ConvergenceVerdict verdict = ConvergenceVerdict::Convergent;
    double residual = 0.0;  // derivative residual of the full solution at strip samples
};

// Decision policy: tail increments (levels beyond the first) are CONVERGENT when
// they vanish or when the last one has decayed to <= 0.2 of the tail peak;
// otherwise the run is flagged DIVERGENT.
ConvergenceProfile convergence_profile(const PontryaginSeries& g, const FrequencyVector& omega,
                                       const DivisibilityChain& chain, double rho, double delta);

const char* verdict_name(ConvergenceVerdict v);

} // namespace solab
