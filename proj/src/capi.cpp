#include "solenoid_ab.h"

#include <cstring>
#include <string>

#include "solab/beltrami.hpp"
#include "solab/counterexamples.hpp"
#include "solab/diophantine.hpp"
#include "solab/runners.hpp"
#include "solab/series.hpp"

namespace {

thread_local std::string g_last_error;

sab_status status_for(solab::ErrorCode code) {
    using solab::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return SAB_ERR_INVALID_ARGUMENT;
        case ErrorCode::Overflow: return SAB_ERR_OVERFLOW;
        case ErrorCode::NonzeroAverage: return SAB_ERR_NONZERO_AVERAGE;
        case ErrorCode::ResonantMode: return SAB_ERR_RESONANT_MODE;
        case ErrorCode::CertificateFailure: return SAB_ERR_CERTIFICATE_FAILURE;
        case ErrorCode::ChainDoesNotResolve: return SAB_ERR_CHAIN;
        case ErrorCode::SupportMargin: return SAB_ERR_SUPPORT_MARGIN;
        case ErrorCode::IterationBudgetExceeded: return SAB_ERR_ITERATION_BUDGET;
        case ErrorCode::ContractivityViolated: return SAB_ERR_CONTRACTIVITY;
        case ErrorCode::DegenerateNormalization: return SAB_ERR_DEGENERATE;
        case ErrorCode::DenominatorNearZero: return SAB_ERR_DENOMINATOR_NEAR_ZERO;
        case ErrorCode::OutOfDomain: return SAB_ERR_OUT_OF_DOMAIN;
        case ErrorCode::ParseError: return SAB_ERR_PARSE;
        case ErrorCode::IoError: return SAB_ERR_IO;
        case ErrorCode::Internal: return SAB_ERR_INTERNAL;
    }
    return SAB_ERR_INTERNAL;
}

template <typename Fn>
sab_status guarded(Fn&& fn) {
    try {
        fn();
        return SAB_OK;
    } catch (const solab::Error& e) {
        g_last_error = e.what();
        return status_for(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SAB_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SAB_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

sab_status invalid(const char* message) {
    g_last_error = message;
    return SAB_ERR_INVALID_ARGUMENT;
}

} // namespace

struct sab_series {
    solab::PontryaginSeries value;
};

struct sab_field {
    solab::BeltramiField value;
};

struct sab_map {
    solab::NormalSolutionField value;
};

extern "C" {

const char* sab_status_name(sab_status status) {
    switch (status) {
        case SAB_OK: return "OK";
        case SAB_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case SAB_ERR_OVERFLOW: return "Overflow";
        case SAB_ERR_NONZERO_AVERAGE: return "NonzeroAverage";
        case SAB_ERR_RESONANT_MODE: return "ResonantMode";
        case SAB_ERR_CERTIFICATE_FAILURE: return "CertificateFailure";
        case SAB_ERR_CHAIN: return "ChainDoesNotResolve";
        case SAB_ERR_SUPPORT_MARGIN: return "SupportMargin";
        case SAB_ERR_ITERATION_BUDGET: return "IterationBudgetExceeded";
        case SAB_ERR_CONTRACTIVITY: return "ContractivityViolated";
        case SAB_ERR_DEGENERATE: return "DegenerateNormalization";
        case SAB_ERR_DENOMINATOR_NEAR_ZERO: return "DenominatorNearZero";
        case SAB_ERR_OUT_OF_DOMAIN: return "OutOfDomain";
        case SAB_ERR_PARSE: return "ParseError";
        case SAB_ERR_IO: return "IoError";
        case SAB_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

const char* sab_last_error_message(void) { return g_last_error.c_str(); }

void sab_string_free(char* text) { delete[] text; }

sab_status sab_series_from_json(const char* json_text, sab_series** out) {
    if (!json_text || !out) return invalid("null argument");
    return guarded([&] {
        *out = new sab_series{solab::PontryaginSeries::from_json(json_text)};
    });
}

sab_status sab_series_to_json(const sab_series* series, char** out_text) {
    if (!series || !out_text) return invalid("null argument");
    return guarded([&] { *out_text = dup_string(series->value.to_json()); });
}

void sab_series_free(sab_series* series) { delete series; }

sab_status sab_series_level(const sab_series* series, int64_t* out_level) {
    if (!series || !out_level) return invalid("null argument");
    return guarded([&] { *out_level = series->value.series_level(); });
}

sab_status sab_series_level_project(const sab_series* series, int64_t level, sab_series** out) {
    if (!series || !out) return invalid("null argument");
    return guarded([&] { *out = new sab_series{solab::level_project(series->value, level)}; });
}

sab_status sab_series_homothety(const sab_series* series, int64_t num, int64_t den,
                                sab_series** out) {
    if (!series || !out) return invalid("null argument");
    return guarded([&] {
        *out = new sab_series{
            solab::homothety_conjugate(series->value, solab::Rational(num, den))};
    });
}

sab_status sab_series_strip_norm(const sab_series* series, double rho, int samples_per_period,
                                 double* out_sampled_lower, double* out_majorant_upper) {
    if (!series || !out_sampled_lower || !out_majorant_upper) return invalid("null argument");
    return guarded([&] {
        const auto est = solab::strip_norm(series->value, rho, samples_per_period);
        *out_sampled_lower = est.sampled_lower;
        *out_majorant_upper = est.majorant_upper;
    });
}

sab_status sab_series_s_norm(const sab_series* series, const int64_t* chain, size_t chain_len,
                             double rho, double* out_norm) {
    if (!series || !chain || !out_norm || chain_len == 0) return invalid("null argument");
    return guarded([&] {
        solab::DivisibilityChain c(std::vector<int64_t>(chain, chain + chain_len));
        *out_norm = solab::s_norm(series->value, c, rho);
    });
}

sab_status sab_diophantine_margin(const double* omega, size_t dimension, int exponent, int64_t K,
                                  double* out_min, int64_t* arg_min) {
    if (!omega || !out_min || dimension == 0) return invalid("null argument");
    return guarded([&] {
        auto res = solab::diophantine_margin(std::vector<double>(omega, omega + dimension),
                                             exponent, K);
        *out_min = res.min_value;
        if (arg_min)
            for (size_t j = 0; j < dimension; ++j) arg_min[j] = res.arg_min[j];
    });
}

sab_status sab_certify_diophantine(const double* omega, size_t dimension, double gamma,
                                   int exponent, int64_t K) {
    if (!omega || dimension == 0) return invalid("null argument");
    return guarded([&] {
        solab::certify_diophantine(std::vector<double>(omega, omega + dimension), gamma,
                                   exponent, K);
    });
}

sab_status sab_solve_cohomological(const sab_series* g, const double* omega, size_t dimension,
                                   double gamma, int exponent, int64_t K, sab_series** out_f) {
    if (!g || !omega || !out_f || dimension == 0) return invalid("null argument");
    return guarded([&] {
        auto fv = solab::certify_diophantine(std::vector<double>(omega, omega + dimension),
                                             gamma, exponent, K);
        auto sol = solab::solve_cohomological(g->value, fv);
        *out_f = new sab_series{std::move(sol.f)};
    });
}

sab_status sab_field_builtin(const char* kind, const char* params_json, double center_re,
                             double center_im, double half_width_x, double half_width_y, int n,
                             sab_field** out) {
    if (!kind || !out) return invalid("null argument");
    return guarded([&] {
        nlohmann::json spec =
            params_json ? solab::parse_config_text(params_json) : nlohmann::json::object();
        spec["kind"] = kind;
        solab::Box box;
        box.center = solab::Complex(center_re, center_im);
        box.half_width_x = half_width_x;
        box.half_width_y = half_width_y;
        double sup_hint = 0.0;
        auto eval = solab::builtin_mu_evaluator(spec, sup_hint);
        *out = new sab_field{solab::make_field(box, n, eval)};
    });
}

sab_status sab_field_from_file(const char* path, sab_field** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] {
        *out = new sab_field{solab::BeltramiField(solab::ComplexGrid::read_binary(path))};
    });
}

sab_status sab_field_write(const sab_field* field, const char* path) {
    if (!field || !path) return invalid("null argument");
    return guarded([&] { field->value.grid.write_binary(path); });
}

sab_status sab_field_sup(const sab_field* field, double* out_sup) {
    if (!field || !out_sup) return invalid("null argument");
    *out_sup = field->value.sup_bound;
    return SAB_OK;
}

void sab_field_free(sab_field* field) { delete field; }

sab_status sab_solve_normal(const sab_field* mu, double tol, int max_iter, sab_map** out) {
    if (!mu || !out) return invalid("null argument");
    return guarded([&] { *out = new sab_map{solab::solve_normal(mu->value, tol, max_iter)}; });
}

sab_status sab_map_eval(const sab_map* map, double re, double im, double* out_re,
                        double* out_im) {
    if (!map || !out_re || !out_im) return invalid("null argument");
    return guarded([&] {
        const auto v = map->value.eval_extended(solab::Complex(re, im));
        *out_re = v.real();
        *out_im = v.imag();
    });
}

sab_status sab_map_iterations(const sab_map* map, int* out_iterations) {
    if (!map || !out_iterations) return invalid("null argument");
    *out_iterations = map->value.iterations;
    return SAB_OK;
}

sab_status sab_map_residual(const sab_map* map, const sab_field* mu, double* out_max_residual,
                            int64_t* out_dilatation_violations) {
    if (!map || !mu || !out_max_residual) return invalid("null argument");
    return guarded([&] {
        const auto rep = solab::beltrami_residual(map->value, mu->value);
        *out_max_residual = rep.max_residual;
        if (out_dilatation_violations) *out_dilatation_violations = rep.dilatation_violations;
    });
}

void sab_map_free(sab_map* map) { delete map; }

sab_status sab_eval_mu_counterexample(double re, double im, int terms, double* out_re,
                                      double* out_im) {
    if (!out_re || !out_im) return invalid("null argument");
    return guarded([&] {
        const auto v = solab::eval_mu_counterexample(solab::Complex(re, im), terms);
        *out_re = v.real();
        *out_im = v.imag();
    });
}

sab_status sab_eval_w_mu(double re, double im, int terms, double* out_re, double* out_im) {
    if (!out_re || !out_im) return invalid("null argument");
    return guarded([&] {
        const auto v = solab::eval_w_mu(solab::Complex(re, im), terms);
        *out_re = v.real();
        *out_im = v.imag();
    });
}

double sab_mu_counterexample_bound(void) { return solab::mu_counterexample_bound(); }

sab_status sab_verify_beltrami_identity(int terms, double half_width_x, double half_width_y,
                                        int grid_n, double h, double* out_max_residual) {
    if (!out_max_residual) return invalid("null argument");
    return guarded([&] {
        solab::Box box;
        box.half_width_x = half_width_x;
        box.half_width_y = half_width_y;
        *out_max_residual = solab::verify_beltrami_identity(terms, box, grid_n, h);
    });
}

sab_status sab_run_command(const char* command, const char* config_json, char** out_report_json,
                           int* out_exit_code) {
    return sab_run_command_to_dir(command, config_json, nullptr, nullptr, 0, 0, out_report_json,
                                  out_exit_code);
}

sab_status sab_run_command_to_dir(const char* command, const char* config_json,
                                  const char* out_dir, const char* base_name, int want_json,
                                  int want_csv, char** out_report_json, int* out_exit_code) {
    if (!command || !config_json || !out_exit_code) return invalid("null argument");
    return guarded([&] {
        const nlohmann::json cfg = solab::parse_config_text(config_json);
        const solab::RunResult res = solab::run_command(command, cfg);
        if (out_dir && base_name)
            solab::write_outputs(res, out_dir, base_name, want_json != 0, want_csv != 0);
        if (out_report_json) *out_report_json = dup_string(solab::report_to_text(res.report));
        *out_exit_code = res.exit_code;
    });
}

} // extern "C"
