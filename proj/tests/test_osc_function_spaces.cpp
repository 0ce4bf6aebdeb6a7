#include <doctest.h>

#include <cmath>
#include <random>

#include "gvi/constants_frozen.hpp"
#include "gvi/osc_function_spaces.hpp"

using namespace gvi;

namespace {

SpaceNormParams base_params(RateCase c = RateCase::SEMISIMPLE) {
    SpaceNormParams p;
    p.R = 2.0;
    p.rho = 1.5;
    p.M_prime = 3.0;
    p.beta = 0.2;
    p.omega = 0.1;
    p.m = 1;
    p.eps = 0.05;
    p.rate_case = c;
    p.gamma0 = 1.0;
    p.c0 = frozen::kC0;
    p.c1 = frozen::kC1;
    return p;
}

// random series with |coefficient| <= scale * envelope, so its norm is at most scale
TrigSeries random_in_ball(std::mt19937_64& rng, const ENorm& E, int N, int K, int size, const std::vector<double>& g,
                          double scale) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TrigSeries v(N, 1, K, size, g);
    for (int n = -N; n <= N; ++n)
        for (int t = 0; t < v.n_times(); ++t)
            for (int i = 0; i < v.indices().size(); ++i)
                for (int c = 0; c < size; ++c)
                    v.mode(n).at(t, i, c) = std::polar(scale * E.envelope(n, t, i) * u(rng), 2.0 * M_PI * u(rng));
    return v;
}

}  // namespace

TEST_CASE("trig series product of conjugate exponentials is constant") {
    TrigSeries a(2, 1, 3, 1), b(2, 1, 3, 1);
    a.mode(1).at(0, 0) = 1.0;
    b.mode(-1).at(0, 0) = 1.0;
    TrigSeries p = ts_product(a, b);
    CHECK(p.mode(0).at(0, 0) == cplx(1.0, 0.0));
    p.mode(0).at(0, 0) = 0.0;
    CHECK(p.is_zero());
}

TEST_CASE("trig series product equals the double convolution") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int N = 4, K = 4;
    TrigSeries a(N, 1, K, 2), b(N, 1, K, 2);
    for (int n = -N; n <= N; ++n)
        for (int i = 0; i <= K; ++i)
            for (int c = 0; c < 2; ++c) {
                a.mode(n).at(0, i, c) = cplx(u(rng), u(rng));
                b.mode(n).at(0, i, c) = cplx(u(rng), u(rng));
            }
    TrigSeries p = ts_product(a, b);
    for (int n = -N; n <= N; ++n)
        for (int k = 0; k <= K; ++k)
            for (int c = 0; c < 2; ++c) {
                cplx want = 0.0;
                for (int q = -N; q <= N; ++q) {
                    int r = n - q;
                    if (r < -N || r > N) continue;
                    for (int j = 0; j <= k; ++j) want += a.mode(q).at(0, j, c) * b.mode(r).at(0, k - j, c);
                }
                CHECK(std::abs(p.mode(n).at(0, k, c) - want) < 1e-12);
            }
    TrigSeries one(N, 1, K, 1);
    one.mode(0).at(0, 0) = 1.0;
    TrigSeries same = ts_product(one, a);
    CHECK(ts_sub(same, a).is_zero());
}

TEST_CASE("theta and x derivatives") {
    TrigSeries u(2, 1, 3, 1);
    u.mode(0).at(0, 0) = 5.0;
    u.mode(1).at(0, 0) = 1.0;
    u.mode(-2).at(0, 2) = 2.0;  // 2 x^2 e^{-2i theta}
    TrigSeries dt = apply_dtheta(u);
    CHECK(dt.mode(0).at(0, 0) == cplx(0.0, 0.0));
    CHECK(dt.mode(1).at(0, 0) == cplx(0.0, 1.0));
    CHECK(dt.mode(-2).at(0, 2) == cplx(0.0, -4.0));
    TrigSeries dx = apply_dx(u, 0);
    CHECK(dx.trunc_order() == 2);
    CHECK(dx.mode(-2).at(0, 1) == cplx(4.0, 0.0));
    CHECK(dx.mode(0).at(0, 0) == cplx(0.0, 0.0));
    CHECK(apply_dx(u, 0, true).trunc_order() == 3);
}

TEST_CASE("weights and growth integral") {
    SpaceNormParams p = base_params(RateCase::GENERAL);
    CHECK(weight(0, 0.0, p) == doctest::Approx(p.c1 * std::exp(-p.M_prime)));
    TimeBudget tb = growth_time(p);
    CHECK(weight(3, tb.s_bar_1, p) == doctest::Approx(p.c1 / 10.0).epsilon(1e-9));
    // quadratic formula for (g + R^-1 + omega + beta) s + eps s^2 / 2 = M'
    double b = p.gamma0 + 1.0 / p.R + p.omega + p.beta;
    double root = (-b + std::sqrt(b * b + 2.0 * p.eps * p.M_prime)) / p.eps;
    CHECK(tb.s_bar_1 == doctest::Approx(root).epsilon(1e-10));
    // Simpson quadrature of the rate
    double s = 1.7, h = s / 200.0, q = 0.0;
    for (int i = 0; i <= 200; ++i) q += (i == 0 || i == 200 ? 1.0 : (i % 2 ? 4.0 : 2.0)) * gamma_rate(i * h, p);
    CHECK(integral_gamma(s, p) == doctest::Approx(q * h / 3.0).epsilon(1e-12));
    SpaceNormParams c = base_params(RateCase::MAXIMAL);
    CHECK(growth_time(c).s_bar_1 == doctest::Approx(c.M_prime / (c.gamma0 + c.beta)));
    SpaceNormParams r = base_params();
    r.rho = 30.0;
    TimeBudget lim = growth_time(r);
    CHECK(lim.regularity_limited);
    CHECK(lim.s_bar == doctest::Approx(1.0 / (r.eps * r.rho)));
    CHECK(mode_bracket(-3, ModeBracket::MAX1) == 3.0);
    CHECK(mode_bracket(0, ModeBracket::MAX1) == 1.0);
}

TEST_CASE("norm at fixed time: zero, envelope, homogeneity") {
    SpaceNormParams p = base_params();
    std::vector<double> g = uniform_grid(growth_time(p).s_bar, 8);
    p.s_bar = g.back();
    ENorm E(p, 1, 5, 3, g);
    TrigSeries z(3, 1, 5, 2, g);
    CHECK(E.norm(z) == 0.0);
    TrigSeries env(3, 1, 5, 1, g);
    for (int n = -3; n <= 3; ++n)
        for (int t = 0; t < 9; ++t)
            for (int i = 0; i <= 5; ++i) env.mode(n).at(t, i) = E.envelope(n, t, i);
    CHECK(E.norm_s(env, 4) == doctest::Approx(1.0));
    std::mt19937_64 rng(5);
    TrigSeries v = random_in_ball(rng, E, 3, 5, 2, g, 0.7);
    CHECK(E.norm(ts_scale(v, 2.0)) == doctest::Approx(2.0 * E.norm(v)));
    CHECK(E.norm(v) <= 0.7);
    CHECK(norm_E(v, p) == doctest::Approx(E.norm(v)));
}

TEST_CASE("constant-in-s series attains its norm at the final time") {
    SpaceNormParams p = base_params();
    std::vector<double> g = uniform_grid(growth_time(p).s_bar, 16);
    p.s_bar = g.back();
    ENorm E(p, 1, 4, 2, g);
    TrigSeries u(2, 1, 4, 1, g);
    for (int n = -2; n <= 2; ++n)
        for (int t = 0; t < 17; ++t)
            for (int i = 0; i <= 4; ++i) u.mode(n).at(t, i) = 1.0 / (1.0 + n * n + i);
    CHECK(E.argmax_time(u) == 0);
    CHECK(E.norm(u) == doctest::Approx(E.norm_s(u, 0)));
}

TEST_CASE("times beyond the regularity limit are excluded") {
    SpaceNormParams p = base_params();
    p.rho = 30.0;
    std::vector<double> g = uniform_grid(1.0 / (p.eps * p.rho) * 1.5, 6);
    ENorm E(p, 1, 3, 1, g);
    CHECK(E.time_valid(0));
    CHECK_FALSE(E.time_valid(6));
    TrigSeries u(1, 1, 3, 1, g);
    CHECK_THROWS_AS(E.norm_s(u, 6), Error);
    CHECK_NOTHROW(E.norm(u));
}

TEST_CASE("product is submultiplicative in the weighted norm") {
    SpaceNormParams p = base_params();
    std::vector<double> g = uniform_grid(growth_time(p).s_bar, 4);
    p.s_bar = g.back();
    int N = 3, K = 5;
    ENorm E(p, 1, K, N, g);
    std::mt19937_64 rng(17);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        TrigSeries a = random_in_ball(rng, E, N, K, 1, g, 1.0);
        TrigSeries b = random_in_ball(rng, E, N, K, 2, g, 1.0);
        if (E.norm(ts_product(a, b)) > E.norm(a) * E.norm(b) * (1.0 + 1e-12)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("single-mode derivative growth is the factor |n|") {
    SpaceNormParams p = base_params();
    std::vector<double> g = uniform_grid(1.0, 2);
    ENorm E(p, 1, 2, 4, g);
    for (int n : {-4, -1, 2, 3}) {
        TrigSeries u(4, 1, 2, 1, g);
        for (int t = 0; t < 3; ++t) u.mode(n).at(t, 1) = 0.5 * E.envelope(n, t, 1);
        CHECK(E.norm(apply_dtheta(u)) == doctest::Approx(std::abs(n) * E.norm(u)));
    }
}

TEST_CASE("regularity-limited grid: the boundary time is excluded") {
    SpaceNormParams p = base_params();
    p.eps = 0.1;
    p.rho = 40.0;
    TimeBudget tb = growth_time(p, 8);
    REQUIRE(tb.regularity_limited);
    p.s_bar = tb.s_bar;
    std::vector<double> g = uniform_grid(tb.s_bar, 8);
    ENorm E(p, 1, 4, 2, g);
    CHECK_FALSE(E.time_valid(8));
    CHECK(E.time_valid(7));
    TrigSeries u(2, 1, 4, 1, g);
    for (int t = 0; t <= 8; ++t) u.mode(1).at(t, 0) = 1.0;
    CHECK(std::isfinite(E.norm(u)));
}
