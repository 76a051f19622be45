#include "solab/diophantine.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace solab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kResonanceTol = 1e-14;

void scan_recursive(const std::vector<double>& omega, int exponent, std::int64_t K,
                    std::vector<std::int64_t>& k, std::size_t depth, double& best,
                    double& best_norm2, std::vector<std::int64_t>& best_k) {
    const std::size_t n = omega.size();
    if (depth == n) {
        double norm2 = 0.0;
        bool zero = true;
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            norm2 += static_cast<double>(k[j]) * static_cast<double>(k[j]);
            dot += omega[j] * static_cast<double>(k[j]);
            if (k[j] != 0) zero = false;
        }
        if (zero) return;
        if (norm2 > static_cast<double>(K) * static_cast<double>(K)) return;
        double value = std::abs(dot) * std::pow(std::sqrt(norm2), exponent);
        // Ties broken toward shorter k, then lexicographically: deterministic
        // and reports the primitive resonance rather than a multiple.
        const bool better = value < best ||
                            (value == best && (best_k.empty() || norm2 < best_norm2 ||
                                               (norm2 == best_norm2 && k < best_k)));
        if (better) {
            best = value;
            best_norm2 = norm2;
            best_k = k;
        }
        return;
    }
    for (std::int64_t v = -K; v <= K; ++v) {
        k[depth] = v;
        scan_recursive(omega, exponent, K, k, depth + 1, best, best_norm2, best_k);
    }
}

std::string format_k(const std::vector<std::int64_t>& k) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << ")";
    return os.str();
}
} // namespace

double FrequencyVector::dot(const RationalMode& mode) const {
    double s = 0.0;
    for (std::size_t j = 0; j < omega.size(); ++j)
        s += omega[j] * mode.entries[j].to_double();
    return s;
}

LatticeScanResult diophantine_margin(const std::vector<double>& omega, int exponent,
                                     std::int64_t K) {
    if (omega.empty()) fail(ErrorCode::InvalidArgument, "omega must be nonempty");
    if (exponent <= 0) fail(ErrorCode::InvalidArgument, "exponent must be positive");
    if (K <= 0) fail(ErrorCode::InvalidArgument, "K must be positive");
    LatticeScanResult res;
    res.min_value = std::numeric_limits<double>::infinity();
    double best_norm2 = 0.0;
    std::vector<std::int64_t> k(omega.size(), 0);
    scan_recursive(omega, exponent, K, k, 0, res.min_value, best_norm2, res.arg_min);
    return res;
}

FrequencyVector certify_diophantine(const std::vector<double>& omega, double gamma,
                                    int exponent, std::int64_t K) {
    if (gamma <= 0.0) fail(ErrorCode::InvalidArgument, "gamma must be positive");
    bool all_zero = true;
    for (double w : omega)
        if (w != 0.0) all_zero = false;
    if (all_zero) fail(ErrorCode::InvalidArgument, "omega must be nonzero");

    LatticeScanResult scan = diophantine_margin(omega, exponent, K);
    if (!(scan.min_value > gamma))
        fail(ErrorCode::CertificateFailure,
             "violating k=" + format_k(scan.arg_min) + " with |omega.k| |k|^n = " +
                 std::to_string(scan.min_value) + " <= gamma = " + std::to_string(gamma));
    FrequencyVector fv;
    fv.omega = omega;
    fv.gamma = gamma;
    fv.exponent = exponent;
    fv.checked_radius = K;
    return fv;
}

CohomologicalSolution solve_cohomological(const PontryaginSeries& g,
                                          const FrequencyVector& omega) {
    if (omega.dimension() != g.dimension())
        fail(ErrorCode::InvalidArgument, "omega dimension does not match series");
    if (g.zero_mode_coefficient() != Complex(0.0, 0.0))
        fail(ErrorCode::NonzeroAverage, "series has nonzero coefficient at the zero mode");

    CohomologicalSolution out{PontryaginSeries(g.dimension()), {}};
    for (const auto& [mode, coef] : g.terms()) {
        const double divisor = omega.dot(mode);
        if (std::abs(divisor) < kResonanceTol) {
            std::string desc = "(";
            for (std::size_t j = 0; j < mode.entries.size(); ++j)
                desc += (j ? "," : "") + mode.entries[j].to_string();
            desc += ")";
            fail(ErrorCode::ResonantMode, "omega.q = " + std::to_string(divisor) +
                                              " below tolerance at mode q=" + desc);
        }
        out.f.set_coefficient(mode, coef / Complex(0.0, kTwoPi * divisor));

        DivisorRecord rec;
        rec.mode = mode;
        rec.divisor = divisor;
        const std::int64_t L = mode.level();
        double k_norm2 = 0.0;
        for (const auto& e : mode.entries) {
            double kj = e.to_double() * static_cast<double>(L);
            k_norm2 += kj * kj;
        }
        double k_norm = std::sqrt(k_norm2);
        rec.bound_used = (k_norm <= static_cast<double>(omega.checked_radius) && k_norm > 0.0)
                             ? omega.gamma / (static_cast<double>(L) * std::pow(k_norm, omega.exponent))
                             : 0.0;
        out.ledger.records.push_back(rec);
    }
    return out;
}

double derivative_residual(const PontryaginSeries& f, const FrequencyVector& omega,
                           const PontryaginSeries& g,
                           const std::vector<std::vector<Complex>>& sample_points) {
    const PontryaginSeries df = f.directional_derivative(omega.omega);
    double worst = 0.0;
    for (const auto& z : sample_points)
        worst = std::max(worst, std::abs(df.evaluate(z) - g.evaluate(z)));
    return worst;
}

ConvergenceProfile convergence_profile(const PontryaginSeries& g, const FrequencyVector& omega,
                                       const DivisibilityChain& chain, double rho, double delta) {
    if (delta <= 0.0 || delta >= rho)
        fail(ErrorCode::InvalidArgument, "need 0 < delta < rho");
    if (chain.back() % g.series_level() != 0)
        fail(ErrorCode::ChainDoesNotResolve, "chain does not resolve the series");

    CohomologicalSolution sol = solve_cohomological(g, omega);

    ConvergenceProfile profile;
    const double weight_exp = 2.0 * g.dimension() + 1.0;
    const double bound_scale = 1.0 / (omega.gamma * std::pow(delta, 2.0 * g.dimension()));
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const std::int64_t hi = chain.entries[i];
        const std::int64_t lo = i == 0 ? 0 : chain.entries[i - 1];
        const auto f_inc = (i == 0) ? level_project(sol.f, hi) : level_increment(sol.f, hi, lo);
        const auto g_inc = (i == 0) ? level_project(g, hi) : level_increment(g, hi, lo);
        ProfileRow row;
        row.level = hi;
        row.increment = majorant_upper(f_inc, rho - delta);
        row.bound_term = std::pow(static_cast<double>(hi), weight_exp) *
                         majorant_upper(g_inc, rho) * bound_scale;
        profile.rows.push_back(row);
    }

    double tail_peak = 0.0;
    double tail_last = 0.0;
    for (std::size_t i = 1; i < profile.rows.size(); ++i) {
        tail_peak = std::max(tail_peak, profile.rows[i].increment);
        tail_last = profile.rows[i].increment;
    }
    const double floor = 1e-10 * std::max(1.0, profile.rows.front().increment);
    if (tail_peak <= floor || tail_last <= 0.2 * tail_peak)
        profile.verdict = ConvergenceVerdict::Convergent;
    else
        profile.verdict = ConvergenceVerdict::Divergent;

    // Spot-check the solution at a few strip samples.
    std::vector<std::vector<Complex>> samples;
    for (int s = 0; s < 8; ++s) {
        std::vector<Complex> z(g.dimension());
        for (int j = 0; j < g.dimension(); ++j)
            z[j] = Complex(0.37 * (s + 1) + 0.11 * j, ((s + j) % 2 ? 1.0 : -1.0) * 0.5 * (rho - delta));
        samples.push_back(z);
    }
    profile.residual = derivative_residual(sol.f, omega, g, samples);
    return profile;
}

const char* verdict_name(ConvergenceVerdict v) {
    return v == ConvergenceVerdict::Convergent ? "CONVERGENT" : "DIVERGENT";
}

} // namespace solab
