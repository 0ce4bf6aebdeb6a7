#include <doctest.h>

#include <cmath>
#include <string>

#include "gvi/gvi.h"

#ifndef GVI_TEST_DATA
#define GVI_TEST_DATA "."
#endif

TEST_CASE("canonical constants through the C API") {
    gvi_constants* c = nullptr;
    REQUIRE(gvi_constants_canonical(&c) == GVI_OK);
    CHECK(gvi_constants_c0(c) == doctest::Approx(0.20922171423467398).epsilon(1e-16));
    CHECK(gvi_constants_c1(c) == doctest::Approx(0.15697464302459921).epsilon(1e-16));
    gvi_constants* d = nullptr;
    REQUIRE(gvi_constants_derive(200, 50, 1, &d) == GVI_OK);
    CHECK(gvi_constants_c0(d) == gvi_constants_c0(c));
    CHECK_FALSE(gvi_constants_equal(c, d));
    gvi_constants_free(c);
    gvi_constants_free(d);
}

TEST_CASE("scalar helpers") {
    int k[1] = {0};
    double v = 0.0;
    REQUIRE(gvi_phi_coefficient(k, 1, 0.2, 1.0, 1.0, 0.0, &v) == GVI_OK);
    CHECK(v == doctest::Approx(0.2));
    k[0] = 1;
    REQUIRE(gvi_phi_coefficient(k, 1, 0.2, 2.0, 1.0, 0.0, &v) == GVI_OK);
    CHECK(v == doctest::Approx(0.2));
    CHECK(gvi_phi_coefficient(k, 1, 0.2, 1.0, 1.0, 1.0, &v) == GVI_ERR_DOMAIN);
    double closed = 0.0, direct = 0.0;
    REQUIRE(gvi_gevrey_norm(1e-2, 0.5, 1.0, 1.0, 0.0, &closed, &direct) == GVI_OK);
    CHECK(std::log(closed / 1e-2) == doctest::Approx(20.0));
    CHECK(gvi_gevrey_norm(-1.0, 0.5, 1.0, 1.0, 0.0, &closed, &direct) == GVI_ERR_INVALID_ARGUMENT);
    CHECK(std::string(gvi_last_error_code()) == "INVALID_ARGUMENT");
    CHECK(std::string(gvi_last_error()).size() > 0);
}

TEST_CASE("symbols and error mapping") {
    gvi_symbol* s = nullptr;
    REQUIRE(gvi_symbol_open("cauchy-riemann", &s) == GVI_OK);
    char* rep = nullptr;
    REQUIRE(gvi_symbol_check(s, &rep) == GVI_OK);
    CHECK(std::string(rep).find("\"gevrey_ceiling\": 0.5") != std::string::npos);
    gvi_string_free(rep);
    gvi_symbol_free(s);
    CHECK(gvi_symbol_open("no-such-model", &s) == GVI_ERR_CONFIG);
    REQUIRE(gvi_symbol_open("file:" GVI_TEST_DATA "/real_spectrum.json", &s) == GVI_OK);
    rep = nullptr;
    CHECK(gvi_symbol_check(s, &rep) == GVI_ERR_ASSUMPTION);
    CHECK(std::string(gvi_last_error_code()) == "NOT_ELLIPTIC");
    gvi_symbol_free(s);
    CHECK(gvi_symbol_check(nullptr, &rep) == GVI_ERR_INVALID_ARGUMENT);
    char* names = nullptr;
    REQUIRE(gvi_builtin_models(&names) == GVI_OK);
    CHECK(std::string(names) == "cauchy-riemann\njordan-elliptic\nmax-flat\n");
    gvi_string_free(names);
}

TEST_CASE("report through the C API") {
    char* js = nullptr;
    int pass = -1;
    REQUIRE(gvi_report(GVI_TEST_DATA "/monotone.csv", &js, &pass) == GVI_OK);
    CHECK(pass == 1);
    gvi_string_free(js);
    REQUIRE(gvi_report(GVI_TEST_DATA "/non_monotone.csv", &js, &pass) == GVI_OK);
    CHECK(pass == 0);
    CHECK(std::string(js).find("0.03125 -> 0.015625") != std::string::npos);
    gvi_string_free(js);
    CHECK(gvi_report("/nonexistent.csv", &js, &pass) == GVI_ERR_IO);
}
