#include "solab/series.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace solab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

bool RationalMode::operator<(const RationalMode& other) const {
    return std::lexicographical_compare(entries.begin(), entries.end(),
                                        other.entries.begin(), other.entries.end());
}

bool RationalMode::is_zero() const {
    for (const auto& e : entries)
        if (!e.is_zero()) return false;
    return true;
}

std::int64_t RationalMode::level() const {
    std::int64_t l = 1;
    for (const auto& e : entries) l = checked_lcm(l, e.den());
    return l;
}

double RationalMode::l1_norm() const {
    double s = 0.0;
    for (const auto& e : entries) s += std::abs(e.to_double());
    return s;
}

bool RationalMode::divides_level(std::int64_t L) const {
    // q reduced, so L*q integer iff den | L entrywise.
    for (const auto& e : entries)
        if (L % e.den() != 0) return false;
    return true;
}

PontryaginSeries::PontryaginSeries(int dimension) : dimension_(dimension) {
    if (dimension < 1) fail(ErrorCode::InvalidArgument, "series dimension must be positive");
}

void PontryaginSeries::set_coefficient(const RationalMode& mode, Complex value) {
    if (static_cast<int>(mode.dimension()) != dimension_)
        fail(ErrorCode::InvalidArgument, "mode dimension mismatch");
    if (value == Complex(0.0, 0.0))
        terms_.erase(mode);
    else
        terms_[mode] = value;
}

void PontryaginSeries::add_coefficient(const RationalMode& mode, Complex value) {
    auto it = terms_.find(mode);
    Complex sum = value + (it != terms_.end() ? it->second : Complex(0.0, 0.0));
    set_coefficient(mode, sum);
}

Complex PontryaginSeries::coefficient(const RationalMode& mode) const {
    auto it = terms_.find(mode);
    return it != terms_.end() ? it->second : Complex(0.0, 0.0);
}

Complex PontryaginSeries::zero_mode_coefficient() const {
    RationalMode zero;
    zero.entries.assign(dimension_, Rational(0));
    return coefficient(zero);
}

std::int64_t PontryaginSeries::series_level() const {
    std::int64_t l = 1;
    for (const auto& [mode, coef] : terms_) {
        (void)coef;
        l = checked_lcm(l, mode.level());
    }
    return l;
}

Complex PontryaginSeries::evaluate(const std::vector<Complex>& z) const {
    if (static_cast<int>(z.size()) != dimension_)
        fail(ErrorCode::InvalidArgument, "evaluation point dimension mismatch");
    Complex acc(0.0, 0.0);
    for (const auto& [mode, coef] : terms_) {
        Complex phase(0.0, 0.0);
        for (int j = 0; j < dimension_; ++j)
            phase += mode.entries[j].to_double() * z[j];
        acc += coef * std::exp(Complex(0.0, kTwoPi) * phase);
    }
    return acc;
}

PontryaginSeries PontryaginSeries::directional_derivative(const std::vector<double>& omega) const {
    if (static_cast<int>(omega.size()) != dimension_)
        fail(ErrorCode::InvalidArgument, "omega dimension mismatch");
    PontryaginSeries out(dimension_);
    for (const auto& [mode, coef] : terms_) {
        double dot = 0.0;
        for (int j = 0; j < dimension_; ++j)
            dot += omega[j] * mode.entries[j].to_double();
        out.set_coefficient(mode, coef * Complex(0.0, kTwoPi * dot));
    }
    return out;
}

PontryaginSeries PontryaginSeries::operator+(const PontryaginSeries& other) const {
    if (dimension_ != other.dimension_)
        fail(ErrorCode::InvalidArgument, "series dimension mismatch");
    PontryaginSeries out = *this;
    for (const auto& [mode, coef] : other.terms_) out.add_coefficient(mode, coef);
    return out;
}

PontryaginSeries PontryaginSeries::operator-(const PontryaginSeries& other) const {
    return *this + other.scaled(Complex(-1.0, 0.0));
}

PontryaginSeries PontryaginSeries::scaled(Complex factor) const {
    PontryaginSeries out(dimension_);
    if (factor == Complex(0.0, 0.0)) return out;
    for (const auto& [mode, coef] : terms_) out.set_coefficient(mode, coef * factor);
    return out;
}

DivisibilityChain::DivisibilityChain(std::vector<std::int64_t> values) : entries(std::move(values)) {
    if (entries.empty()) fail(ErrorCode::InvalidArgument, "empty divisibility chain");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i] <= 0) fail(ErrorCode::InvalidArgument, "chain entries must be positive");
        if (i > 0) {
            if (entries[i] <= entries[i - 1])
                fail(ErrorCode::InvalidArgument, "chain must be strictly increasing");
            if (entries[i] % entries[i - 1] != 0)
                fail(ErrorCode::InvalidArgument, "chain entry " + std::to_string(entries[i]) +
                                                     " not divisible by " + std::to_string(entries[i - 1]));
        }
    }
}

PontryaginSeries level_project(const PontryaginSeries& g, std::int64_t L) {
    if (L <= 0) fail(ErrorCode::InvalidArgument, "projection level must be positive");
    PontryaginSeries out(g.dimension());
    for (const auto& [mode, coef] : g.terms())
        if (mode.divides_level(L)) out.set_coefficient(mode, coef);
    return out;
}

PontryaginSeries level_increment(const PontryaginSeries& g, std::int64_t hi, std::int64_t lo) {
    if (hi <= 0 || lo <= 0) fail(ErrorCode::InvalidArgument, "levels must be positive");
    PontryaginSeries out(g.dimension());
    for (const auto& [mode, coef] : g.terms())
        if (mode.divides_level(hi) && !mode.divides_level(lo)) out.set_coefficient(mode, coef);
    return out;
}

double majorant_upper(const PontryaginSeries& g, double rho) {
    if (rho <= 0.0) fail(ErrorCode::InvalidArgument, "rho must be positive");
    double s = 0.0;
    for (const auto& [mode, coef] : g.terms())
        s += std::abs(coef) * std::exp(kTwoPi * rho * mode.l1_norm());
    return s;
}

StripNormEstimate strip_norm(const PontryaginSeries& g, double rho, int samples_per_period) {
    if (rho <= 0.0) fail(ErrorCode::InvalidArgument, "rho must be positive");
    if (samples_per_period <= 0)
        fail(ErrorCode::InvalidArgument, "samples_per_period must be positive");

    StripNormEstimate est;
    est.rho = rho;
    est.majorant_upper = majorant_upper(g, rho);
    if (g.is_zero()) return est;

    const int n = g.dimension();
    // Fundamental real period per coordinate: lcm of mode denominators there.
    std::vector<double> period(n, 1.0);
    for (int j = 0; j < n; ++j) {
        std::int64_t l = 1;
        for (const auto& [mode, coef] : g.terms()) {
            (void)coef;
            l = checked_lcm(l, mode.entries[j].den());
        }
        period[j] = static_cast<double>(l);
    }

    const double rho_inner = rho * (1.0 - 1e-9);
    const int M = samples_per_period;
    std::vector<int> idx(n, 0);
    std::vector<Complex> z(n);
    double best = 0.0;
    // Distinguished boundary: every sign pattern of Im z_j = +-rho_inner.
    for (int signs = 0; signs < (1 << n); ++signs) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (int j = 0; j < n; ++j) {
                double x = period[j] * (static_cast<double>(idx[j]) / M);
                double y = ((signs >> j) & 1) ? rho_inner : -rho_inner;
                z[j] = Complex(x, y);
            }
            best = std::max(best, std::abs(g.evaluate(z)));
            int j = 0;
            while (j < n && ++idx[j] == M) idx[j++] = 0;
            if (j == n) break;
        }
    }
    est.sampled_lower = best;
    return est;
}

double s_norm(const PontryaginSeries& g, const DivisibilityChain& chain, double rho) {
    if (rho <= 0.0) fail(ErrorCode::InvalidArgument, "rho must be positive");
    if (chain.back() % g.series_level() != 0)
        fail(ErrorCode::ChainDoesNotResolve,
             "series level " + std::to_string(g.series_level()) +
                 " does not divide last chain entry " + std::to_string(chain.back()));
    const double weight_exp = 2.0 * g.dimension() + 1.0;
    double total = std::pow(static_cast<double>(chain.entries[0]), weight_exp) *
                   majorant_upper(level_project(g, chain.entries[0]), rho);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const auto inc = level_increment(g, chain.entries[i], chain.entries[i - 1]);
        total += std::pow(static_cast<double>(chain.entries[i]), weight_exp) *
                 majorant_upper(inc, rho);
    }
    return total;
}

PontryaginSeries homothety_conjugate(const PontryaginSeries& g, const Rational& a) {
    if (a.is_zero()) fail(ErrorCode::InvalidArgument, "homothety factor must be nonzero");
    PontryaginSeries out(g.dimension());
    for (const auto& [mode, coef] : g.terms()) {
        RationalMode scaled;
        scaled.entries.reserve(mode.entries.size());
        for (const auto& e : mode.entries) scaled.entries.push_back(a * e);
        out.set_coefficient(scaled, coef);
    }
    return out;
}

std::string PontryaginSeries::to_json() const {
    nlohmann::json doc;
    doc["dimension"] = dimension_;
    doc["terms"] = nlohmann::json::array();
    for (const auto& [mode, coef] : terms_) {
        nlohmann::json term;
        term["mode"] = nlohmann::json::array();
        for (const auto& e : mode.entries)
            term["mode"].push_back({std::to_string(e.num()), std::to_string(e.den())});
        term["re"] = coef.real();
        term["im"] = coef.imag();
        doc["terms"].push_back(term);
    }
    return doc.dump(2);
}

PontryaginSeries PontryaginSeries::from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, std::string("series JSON: ") + e.what());
    }
    if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
        fail(ErrorCode::ParseError, "series JSON: missing integer field 'dimension'");
    PontryaginSeries out(doc["dimension"].get<int>());
    if (!doc.contains("terms") || !doc["terms"].is_array())
        fail(ErrorCode::ParseError, "series JSON: missing array field 'terms'");
    for (const auto& term : doc["terms"]) {
        if (!term.contains("mode") || !term["mode"].is_array() ||
            static_cast<int>(term["mode"].size()) != out.dimension())
            fail(ErrorCode::ParseError, "series JSON: bad 'mode' entry");
        RationalMode mode;
        for (const auto& pair : term["mode"]) {
            if (!pair.is_array() || pair.size() != 2)
                fail(ErrorCode::ParseError, "series JSON: mode entries must be [num, den] string pairs");
            try {
                std::int64_t num = std::stoll(pair[0].get<std::string>());
                std::int64_t den = std::stoll(pair[1].get<std::string>());
                mode.entries.emplace_back(num, den);
            } catch (const std::exception&) {
                fail(ErrorCode::ParseError, "series JSON: unparsable rational");
            }
        }
        double re = term.value("re", 0.0);
        double im = term.value("im", 0.0);
        out.add_coefficient(mode, Complex(re, im));
    }
    return out;
}

} // namespace solab
