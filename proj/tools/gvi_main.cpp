#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gvi/gvi.h"

namespace {

int report_failure(gvi_status st) {
    std::fprintf(stderr, "error [%s]: %s\n", gvi_last_error_code(), gvi_last_error());
    switch (st) {
    case GVI_ERR_ASSUMPTION:
    case GVI_ERR_K_TOO_LARGE:
    case GVI_ERR_NO_CONVERGENCE:
    case GVI_ERR_CONFIG:
        return static_cast<int>(st);
    case GVI_ERR_IO:
        return 5;
    default:
        return 1;
    }
}

void print_and_free(char* s) {
    if (!s) return;
    std::fputs(s, stdout);
    std::fputc('\n', stdout);
    gvi_string_free(s);
}

bool file_exists(const std::string& p) { return std::ifstream(p).good(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for Gevrey ill-posedness of first-order elliptic systems"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads = 1;
    std::string out;
    int seed = 0;
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "output path (constants file or sweep prefix)");
    app.add_option("--seed", seed, "seed for random property-test corpora");

    auto* derive = app.add_subcommand("derive-constants", "derive c0 and c1 and write them as JSON");
    int k_max = 100000, n_max = 10000;
    derive->add_option("--k-max", k_max, "last k in the c0 sweep")->check(CLI::PositiveNumber);
    derive->add_option("--n-max", n_max, "last |n| in the c1 sweep")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check-symbol", "run the assumption chain on a model");
    std::string model;
    check->add_option("model", model, "built-in model name or file:<path>")->required();

    auto* sweep = app.add_subcommand("sweep", "run an eps sweep and write CSV + manifest");
    std::string config, constants_path;
    sweep->add_option("config", config, "scenario config (JSON)")->required();
    sweep->add_option("--constants", constants_path, "constants file; canonical values when omitted");

    auto* report = app.add_subcommand("report", "monotonicity verdicts for a sweep CSV");
    std::string csv;
    report->add_option("csv", csv, "sweep CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 5;
    }

    if (derive->parsed()) {
        std::string path = out.empty() ? "data/constants.json" : out;
        gvi_constants* c = nullptr;
        gvi_status st = gvi_constants_derive(k_max, n_max, threads, &c);
        if (st != GVI_OK) return report_failure(st);
        std::printf("c0 = %.17g\nc1 = %.17g\n", gvi_constants_c0(c), gvi_constants_c1(c));
        if (file_exists(path)) {
            gvi_constants* old = nullptr;
            if (gvi_constants_load(path.c_str(), &old) == GVI_OK && gvi_constants_equal(c, old)) {
                std::printf("%s unchanged\n", path.c_str());
                gvi_constants_free(old);
                gvi_constants_free(c);
                return 0;
            }
            gvi_constants_free(old);
        }
        st = gvi_constants_save(c, path.c_str());
        gvi_constants_free(c);
        if (st != GVI_OK) return report_failure(st);
        std::printf("wrote %s\n", path.c_str());
        return 0;
    }

    if (check->parsed()) {
        gvi_symbol* s = nullptr;
        gvi_status st = gvi_symbol_open(model.c_str(), &s);
        if (st != GVI_OK) return report_failure(st);
        char* rep = nullptr;
        st = gvi_symbol_check(s, &rep);
        gvi_symbol_free(s);
        print_and_free(rep);
        return st == GVI_OK ? 0 : report_failure(st);
    }

    if (sweep->parsed()) {
        gvi_constants* c = nullptr;
        if (!constants_path.empty()) {
            gvi_status st = gvi_constants_load(constants_path.c_str(), &c);
            if (st != GVI_OK) return report_failure(st);
        }
        char* summary = nullptr;
        gvi_status st = gvi_sweep_run(config.c_str(), out.empty() ? nullptr : out.c_str(), threads, c, &summary);
        gvi_constants_free(c);
        print_and_free(summary);
        return st == GVI_OK ? 0 : report_failure(st);
    }

    if (report->parsed()) {
        char* js = nullptr;
        int all_pass = 0;
        gvi_status st = gvi_report(csv.c_str(), &js, &all_pass);
        print_and_free(js);
        if (st != GVI_OK) return report_failure(st);
        return all_pass ? 0 : 1;
    }
    return 1;
}
