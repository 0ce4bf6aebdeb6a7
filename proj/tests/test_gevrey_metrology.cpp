#include <doctest.h>

#include <cmath>

#include "gvi/gevrey_metrology.hpp"
#include "gvi/principal_symbol.hpp"

using namespace gvi;

TEST_CASE("GENERAL m = 1 schedule at eps = 1e-2") {
    ScenarioParams p = select_parameters(1e-2, 0.3, RateCase::GENERAL, 1);
    double e_delta = std::pow(10.0, -0.6);
    CHECK(p.M_prime == doctest::Approx(p.M));
    CHECK(p.M == doctest::Approx(1.0 / e_delta));
    CHECK(p.omega == doctest::Approx(e_delta));
    CHECK(p.beta == doctest::Approx(e_delta));
    CHECK(1.0 / p.R == doctest::Approx(e_delta));
    CHECK(1.0 / p.rho == doctest::Approx(0.1));
}

TEST_CASE("Gevrey ceilings gate the schedule") {
    try {
        select_parameters(1e-2, 0.4, RateCase::GENERAL, 2);
        FAIL("delta above 1/3 accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::index_out_of_range);
    }
    CHECK_NOTHROW(select_parameters(1e-2, 0.6, RateCase::MAXIMAL, 1));
    CHECK_THROWS_AS(select_parameters(1e-2, 0.5, RateCase::SEMISIMPLE, 1), Error);
    CHECK(gevrey_ceiling(RateCase::GENERAL, 3) == doctest::Approx(0.25));
}

TEST_CASE("semisimple schedules") {
    double eps = 1.0 / 64.0, delta = 0.3, L = std::log(64.0);
    ScenarioParams lit = select_parameters(eps, delta, RateCase::SEMISIMPLE, 1);
    CHECK(lit.omega == 0.0);
    CHECK(1.0 / lit.R == doctest::Approx(eps));
    CHECK(1.0 / lit.rho == doctest::Approx(std::pow(eps, 1.0 - delta / 2.0)));
    CHECK(lit.M_prime == doctest::Approx(std::pow(eps, -delta) - (1.0 - delta) * L));
    ScenarioParams con = select_parameters(eps, delta, RateCase::SEMISIMPLE, 1, 1.0, Schedule::CONSISTENT);
    CHECK(1.0 / con.R == doctest::Approx(std::pow(eps, delta)));
    CHECK(1.0 / con.rho == doctest::Approx(std::sqrt(eps)));
    // integral of the rate up to s_bar_1 spends M'
    SpaceNormParams sp = lit.space(1.0, 1.0);
    CHECK(integral_gamma(lit.s_bar_1, sp) == doctest::Approx(lit.M_prime).epsilon(1e-10));
}

TEST_CASE("Gevrey norm of the oscillating datum") {
    // sigma = 1, c = 1, eps = 1: closed exponent 1, sup over k of 1/k! tied at k = 0, 1
    GevreyNorm a = gevrey_norm_oscillatory(1.0, 1.0, 1.0, 1.0, 0.0);
    CHECK(a.closed_form == doctest::Approx(std::exp(1.0)));
    CHECK(a.direct == doctest::Approx(1.0));
    CHECK(a.argmax_k == 1);
    // eps = 1e-2, sigma = 1/2: sup_k 100^k / (k!)^2 = (10^10 / 10!)^2
    GevreyNorm b = gevrey_norm_oscillatory(1e-2, 0.5, 1.0, 1.0, 0.0);
    CHECK(std::log(b.closed_form / 1e-2) == doctest::Approx(20.0));
    double f10 = 3628800.0;
    CHECK(b.direct / 1e-2 == doctest::Approx(std::pow(1e10 / f10, 2)).epsilon(1e-10));
    CHECK(b.argmax_k == 10);
    CHECK(b.k_cap == 40);
    // the sup sits a factor (2 pi k)^{-1/(2 sigma)} below the closed form
    CHECK(b.direct / b.closed_form == doctest::Approx(0.0156525).epsilon(1e-4));
    CHECK(gevrey_norm_from_derivatives({2.5, 0.0, 0.0, 0.0}, 0.3, 1.0) == doctest::Approx(2.5));
}

TEST_CASE("Gauss-Legendre rule") {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    for (int p = 0; p <= 15; ++p) {
        double q = 0.0;
        for (int i = 0; i < 8; ++i) q += w[i] * std::pow(x[i], p);
        double want = p % 2 ? 0.0 : 2.0 / (p + 1);
        CHECK(q == doctest::Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("cone quadrature") {
    auto one = [](double, const std::vector<double>&) { return 1.0; };
    CHECK(l2_norm_on_cone(one, 1, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (auto [R, rho] : {std::pair{2.0, 0.5}, std::pair{64.0, 37.3}, std::pair{0.3, 5.0}})
        CHECK(std::abs(std::pow(l2_norm_on_cone(one, 1, R, rho), 2) - 1.0 / (R * rho)) <= 1e-10 / (R * rho));
    // d = 2: volume int_0^{1/rho} 2 ((1 - rho t)/R)^2 dt = 2 / (3 R^2 rho)
    CHECK(std::pow(l2_norm_on_cone(one, 2, 1.5, 2.0), 2) == doctest::Approx(2.0 / (3.0 * 2.25 * 2.0)).epsilon(1e-10));
    // |e^{i x / eps}|^2 = 1 pointwise
    double eps = 1e-3;
    auto osc = [&](double, const std::vector<double>& x) { return std::norm(std::polar(1.0, x[0] / eps)); };
    ConeQuadrature q;
    q.x_panel = 0.05;
    CHECK(l2_norm_on_cone(osc, 1, 2.0, 3.0, q) == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-12));
    // restriction to t <= t_max: 2 int_0^T (1 - t) dt
    q.t_max = 0.5;
    CHECK(std::pow(l2_norm_on_cone(one, 1, 1.0, 1.0, q), 2) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("predicted envelope") {
    // sigma = 0.2 < delta = 0.3: increases as eps decreases
    double prev = 0.0;
    for (int k = 4; k <= 10; ++k) {
        double e = predicted_envelope(std::ldexp(1.0, -k), 1, 0.3, 1, 1.0, 1.0, 0.2);
        CHECK(e > prev);
        prev = e;
    }
    // sigma = delta, c = 1, alpha = 1: exponentials cancel, eps^{0.1} remains
    for (int k = 4; k <= 10; ++k) {
        double eps = std::ldexp(1.0, -k);
        CHECK(predicted_envelope(eps, 1, 0.3, 1, 1.0, 1.0, 0.3) == doctest::Approx(std::pow(eps, 0.1)));
    }
    ScenarioParams p = select_parameters(1.0 / 64.0, 0.3, RateCase::SEMISIMPLE, 1);
    p.alpha = 0.5;
    p.sigma = 0.2;
    InstabilityRow r = instability_ratio(3.0, 16.0, p, 1);
    CHECK(r.ratio == doctest::Approx(0.75));
}
