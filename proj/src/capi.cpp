#include "gvi/gvi.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gvi/experiment.hpp"

struct gvi_constants {
    gvi::UniversalConstants value;
};

struct gvi_symbol {
    gvi::SymbolFamily family;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_error_code;

gvi_status map_code(gvi::ErrorCode c) {
    using gvi::ErrorCode;
    switch (c) {
    case ErrorCode::not_elliptic:
    case ErrorCode::assumption_failed:
        return GVI_ERR_ASSUMPTION;
    case ErrorCode::k_too_large:
    case ErrorCode::norm_escape:
        return GVI_ERR_K_TOO_LARGE;
    case ErrorCode::no_convergence:
        return GVI_ERR_NO_CONVERGENCE;
    case ErrorCode::config:
    case ErrorCode::index_out_of_range:
        return GVI_ERR_CONFIG;
    case ErrorCode::invalid_argument:
    case ErrorCode::shape_mismatch:
    case ErrorCode::grid_mismatch:
        return GVI_ERR_INVALID_ARGUMENT;
    case ErrorCode::domain:
    case ErrorCode::step_rejected:
    case ErrorCode::continuation_lost:
    case ErrorCode::no_candidate:
        return GVI_ERR_DOMAIN;
    case ErrorCode::io:
        return GVI_ERR_IO;
    }
    return GVI_ERR_INTERNAL;
}

template <class F>
gvi_status guarded(F&& f) {
    try {
        f();
        g_error.clear();
        g_error_code.clear();
        return GVI_OK;
    } catch (const gvi::Error& e) {
        g_error = e.what();
        g_error_code = gvi::error_code_name(e.code());
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_error = e.what();
        g_error_code = "INTERNAL";
        return GVI_ERR_INTERNAL;
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

void need(const void* p, const char* what) {
    if (!p) gvi::fail(gvi::ErrorCode::invalid_argument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* gvi_last_error(void) { return g_error.c_str(); }
const char* gvi_last_error_code(void) { return g_error_code.c_str(); }
const char* gvi_version(void) { return "1.0.0"; }
void gvi_string_free(char* s) { std::free(s); }

gvi_status gvi_constants_canonical(gvi_constants** out) {
    return guarded([&] {
        need(out, "out");
        *out = new gvi_constants{gvi::canonical_constants()};
    });
}

gvi_status gvi_constants_derive(int k_max, int n_max, int threads, gvi_constants** out) {
    return guarded([&] {
        need(out, "out");
        *out = new gvi_constants{gvi::derive_constants(k_max, n_max, threads)};
    });
}

gvi_status gvi_constants_load(const char* path, gvi_constants** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new gvi_constants{gvi::load_constants(path)};
    });
}

gvi_status gvi_constants_save(const gvi_constants* c, const char* path) {
    return guarded([&] {
        need(c, "constants");
        need(path, "path");
        gvi::save_constants(c->value, path);
    });
}

double gvi_constants_c0(const gvi_constants* c) { return c ? c->value.c0 : 0.0; }
double gvi_constants_c1(const gvi_constants* c) { return c ? c->value.c1 : 0.0; }

int gvi_constants_equal(const gvi_constants* a, const gvi_constants* b) {
    if (!a || !b) return 0;
    return a->value.c0 == b->value.c0 && a->value.c1 == b->value.c1;
}

void gvi_constants_free(gvi_constants* c) { delete c; }

gvi_status gvi_symbol_open(const char* name, gvi_symbol** out) {
    return guarded([&] {
        need(name, "name");
        need(out, "out");
        *out = new gvi_symbol{gvi::resolve_model(name)};
    });
}

gvi_status gvi_symbol_check(const gvi_symbol* s, char** report_json) {
    return guarded([&] {
        need(s, "symbol");
        need(report_json, "report_json");
        *report_json = nullptr;
        gvi::AssumptionReport rep = gvi::analyze_symbol(s->family);
        *report_json = dup(gvi::assumption_report_json(rep));
        if (!rep.quadratic_source)
            gvi::fail(gvi::ErrorCode::assumption_failed, "source term is not quadratic in u");
    });
}

void gvi_symbol_free(gvi_symbol* s) { delete s; }

gvi_status gvi_builtin_models(char** names) {
    return guarded([&] {
        need(names, "names");
        std::string all;
        for (const auto& n : gvi::builtin_model_names()) all += n + "\n";
        *names = dup(all);
    });
}

gvi_status gvi_phi_coefficient(const int* k, int d, double c0, double R, double rho, double t, double* out) {
    return guarded([&] {
        need(out, "out");
        if (d > 0) need(k, "k");
        gvi::ModelMajorant m;
        m.R = R;
        m.rho = rho;
        m.c0 = c0;
        *out = gvi::phi_coefficient(gvi::MultiIndex(k, k + d), t, m);
    });
}

gvi_status gvi_gevrey_norm(double eps, double sigma, double c, double amplitude, double M, double* closed_form,
                           double* direct) {
    return guarded([&] {
        gvi::GevreyNorm g = gvi::gevrey_norm_oscillatory(eps, sigma, c, amplitude, M);
        if (closed_form) *closed_form = g.closed_form;
        if (direct) *direct = g.direct;
    });
}

gvi_status gvi_sweep_run(const char* config_path, const char* out_prefix, int threads,
                         const gvi_constants* constants, char** summary_json) {
    return guarded([&] {
        need(config_path, "config_path");
        if (summary_json) *summary_json = nullptr;
        gvi::ScenarioConfig cfg = gvi::load_config(config_path);
        std::filesystem::path cp(config_path);
        std::string base = cp.has_parent_path() ? cp.parent_path().string() : ".";
        const gvi::UniversalConstants& uc = constants ? constants->value : gvi::canonical_constants();
        gvi::SweepSummary s = gvi::run_sweep(cfg, uc, out_prefix ? out_prefix : "", threads, base);
        if (summary_json) *summary_json = dup(s.to_json());
        if (s.has_error) gvi::fail(s.first_error, "at least one sweep row failed; see the manifest");
    });
}

gvi_status gvi_report(const char* csv_path, char** report_json, int* all_pass) {
    return guarded([&] {
        need(csv_path, "csv_path");
        std::ifstream in(csv_path);
        if (!in) gvi::fail(gvi::ErrorCode::io, std::string("cannot read ") + csv_path);
        std::stringstream ss;
        ss << in.rdbuf();
        gvi::SweepReport r = gvi::report_csv(ss.str());
        if (report_json) *report_json = dup(r.to_json());
        if (all_pass) *all_pass = r.all_pass() ? 1 : 0;
    });
}

}  // extern "C"
