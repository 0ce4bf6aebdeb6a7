#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "gvi/constants_frozen.hpp"
#include "gvi/majorant_series.hpp"

using namespace gvi;

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Phi_k(t) summed term by term with explicit factorials
double phi_oracle(const MultiIndex& k, double t, double R, double rho, double c0) {
    int o = 0;
    double denom = 1.0;
    for (int v : k) {
        o += v;
        denom *= factorial(v);
    }
    long double sum = 0.0L;
    for (int p = 0; p <= 150; ++p) {
        long double multi = factorial(o + p) / (denom * factorial(p));
        sum += c0 / ((o + p) * (o + p) + 1.0L) * multi * std::pow(static_cast<long double>(rho * t), p);
    }
    return static_cast<double>(std::pow(R, o) * sum);
}

using Coeffs = std::map<MultiIndex, Eigen::MatrixXcd>;

Coeffs to_map(const PowerSeriesX& a, int t = 0) {
    Coeffs m;
    for (int i = 0; i < a.n_index(); ++i) {
        Eigen::MatrixXcd b(a.rows(), a.cols());
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c) b(r, c) = a.at(t, i, r, c);
        m[a.indices().index(i)] = b;
    }
    return m;
}

// Cauchy product over all pairs, dropping orders above K
Coeffs brute_mul(const Coeffs& a, const Coeffs& b, int K) {
    Coeffs out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            MultiIndex k(ka.size());
            int o = 0;
            for (size_t j = 0; j < k.size(); ++j) o += (k[j] = ka[j] + kb[j]);
            if (o > K) continue;
            Eigen::MatrixXcd prod = va.size() == 1 ? Eigen::MatrixXcd(va(0, 0) * vb) : Eigen::MatrixXcd(va * vb);
            auto it = out.find(k);
            if (it == out.end()) out[k] = prod;
            else it->second += prod;
        }
    return out;
}

PowerSeriesX random_series(std::mt19937_64& rng, int d, int K, int rows, int cols) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PowerSeriesX a(d, K, rows, cols);
    for (auto& v : a.data()) v = cplx(u(rng), u(rng));
    return a;
}

}  // namespace

TEST_CASE("index set enumerates every multi-index once") {
    for (int d = 1; d <= 3; ++d)
        for (int K = 0; K <= 6; ++K) {
            IndexSet s(d, K);
            double binom = std::round(std::exp(std::lgamma(d + K + 1.0) - std::lgamma(d + 1.0) - std::lgamma(K + 1.0)));
            CHECK(s.size() == static_cast<int>(binom));
            for (int i = 0; i < s.size(); ++i) {
                CHECK(s.find(s.index(i)) == i);
                if (i > 0) CHECK(s.order(i) >= s.order(i - 1));
            }
        }
    IndexSet s(2, 3);
    CHECK(s.find({4, 0}) == -1);
    CHECK(s.shift(s.find({1, 2}), 0) == -1);
    CHECK(s.index(s.shift(s.find({1, 1}), 1)) == MultiIndex{1, 2});
}

TEST_CASE("ps_mul agrees with the brute-force Cauchy product") {
    std::mt19937_64 rng(7);
    for (int d = 1; d <= 3; ++d)
        for (int K : {0, 3, 6}) {
            PowerSeriesX a = random_series(rng, d, K, 2, 3);
            PowerSeriesX b = random_series(rng, d, K, 3, 2);
            PowerSeriesX c = ps_mul(a, b);
            Coeffs want = brute_mul(to_map(a), to_map(b), K);
            for (const auto& [k, v] : want)
                for (int r = 0; r < 2; ++r)
                    for (int q = 0; q < 2; ++q) CHECK(std::abs(c.coeff(k, r, q) - v(r, q)) <= 1e-12 * (1.0 + std::abs(v(r, q))));
        }
}

TEST_CASE("ps_mul broadcasts a scalar factor") {
    std::mt19937_64 rng(11);
    PowerSeriesX s = random_series(rng, 2, 4, 1, 1);
    PowerSeriesX m = random_series(rng, 2, 4, 2, 2);
    PowerSeriesX c = ps_mul(s, m);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 2);
    for (const auto& [k, v] : brute_mul(to_map(s), to_map(m), 4))
        for (int r = 0; r < 2; ++r)
            for (int q = 0; q < 2; ++q) CHECK(std::abs(c.coeff(k, r, q) - v(r, q)) < 1e-12);
}

TEST_CASE("derivative and add respect truncation") {
    PowerSeriesX a(1, 4);
    for (int k = 0; k <= 4; ++k) a.set_coeff({k}, cplx(k + 1.0, 0.0));
    PowerSeriesX da = ps_derive(a, 0);
    CHECK(da.trunc_order() == 3);
    for (int k = 0; k <= 3; ++k) CHECK(da.coeff({k}).real() == doctest::Approx((k + 1.0) * (k + 2.0)));
    PowerSeriesX s = ps_add(a, da);
    CHECK(s.trunc_order() == 3);
    CHECK(s.coeff({2}).real() == doctest::Approx(3.0 + 12.0));
    CHECK_THROWS_AS(ps_add(PowerSeriesX(1, 2), PowerSeriesX(2, 2)), Error);
}

TEST_CASE("phi coefficient matches the term-by-term sum") {
    double c0 = frozen::kC0;
    for (const MultiIndex& k : {MultiIndex{0}, MultiIndex{3}, MultiIndex{2, 1}, MultiIndex{1, 1, 2}})
        for (double t : {0.0, 0.1, 0.3}) {
            double want = phi_oracle(k, t, 1.7, 2.0, c0);
            CHECK(phi_coefficient(k, t, {1.0, 1.7, 2.0, c0}) == doctest::Approx(want).epsilon(1e-11));
        }
    CHECK(phi_order_coefficient(5, 0.0, 2.0, 1.0, c0) == doctest::Approx(c0 * 32.0 / 26.0));
    CHECK_THROWS_AS(phi_order_coefficient(2, 1.0, 1.0, 1.0, c0), Error);
}

TEST_CASE("c0 bracket and frozen constants") {
    // brute-force bracket at the argmax of the canonical sweep
    double s = 0.0;
    for (int p = 0; p <= 9; ++p) s += 1.0 / ((p * p + 1.0) * ((9 - p) * (9 - p) + 1.0));
    CHECK(c0_bracket(9) == doctest::Approx(82.0 * s).epsilon(1e-14));
    CHECK(c0_bracket(9) == doctest::Approx(4.7318224287636053).epsilon(1e-14));
    SweepResult r = derive_c0(2000);
    CHECK(r.argmax == 9);
    CHECK(r.value == frozen::kC0);
    CHECK(canonical_constants().c0 == frozen::kC0);
    CHECK(canonical_constants().c1 == frozen::kC1);
}

TEST_CASE("c1 bracket window and tail bound") {
    int n = 37;
    double wide = 0.0;
    for (int p = -200000; p <= 200000; ++p) wide += 1.0 / ((double(p) * p + 1.0) * (double(n - p) * (n - p) + 1.0));
    wide *= n * n + 1.0;
    double w = c1_bracket_window(n, c1_default_window(n));
    CHECK(w <= wide);
    CHECK(w + c1_bracket_tail_bound(n, c1_default_window(n)) >= wide);
    CHECK(c1_bracket_upper(n) >= wide);
    CHECK_THROWS_AS(c1_bracket_tail_bound(n, n), Error);
}

TEST_CASE("model series satisfies Phi^2 < Phi coefficient-wise") {
    PowerSeriesX phi = phi_series_1d(200, frozen::kC0);
    MajorizeReport r = dominates(ps_mul(phi, phi), phi);
    CHECK(r.holds);
    CHECK(r.worst_ratio <= 1.0);
    PowerSeriesX big = phi_series_1d(60, 1.0);
    CHECK_FALSE(dominates(ps_mul(big, big), big).holds);
}

TEST_CASE("majorizes reports the worst coefficient") {
    PowerSeriesX a(1, 3);
    ModelMajorant m{2.0, 1.0, 0.0, frozen::kC0};
    for (int k = 0; k <= 3; ++k) a.set_coeff({k}, frozen::kC0 / (k * k + 1.0));
    CHECK(majorizes(a, m, {0.0}).holds);
    a.set_coeff({2}, 3.0 * frozen::kC0 / 5.0);
    MajorizeReport r = majorizes(a, m, {0.0});
    CHECK_FALSE(r.holds);
    CHECK(r.worst_k == MultiIndex{2});
    CHECK(r.worst_ratio == doctest::Approx(1.5));
}

TEST_CASE("constants JSON round trip and validation") {
    UniversalConstants c = canonical_constants();
    UniversalConstants back = constants_from_json(constants_to_json(c));
    CHECK(back.c0 == c.c0);
    CHECK(back.c1 == c.c1);
    CHECK(back.k_max == c.k_max);
    try {
        constants_from_json("{\"c0\": 1.0}");
        FAIL("missing field accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
    }
    CHECK_THROWS_AS(constants_from_json("not json"), Error);
    CHECK_THROWS_AS(load_constants("/nonexistent/constants.json"), Error);
}

TEST_CASE("analytic majorant fit bounds a geometric oracle") {
    // H = 1 / (1 - 3t - x): coefficient multinomial(kt + kx; kt, kx) 3^kt
    CoefficientOracle h = [](int kt, const MultiIndex& kx, const MultiIndex&) {
        int ox = kx.empty() ? 0 : kx[0];
        return std::exp(std::lgamma(kt + ox + 1.0) - std::lgamma(kt + 1.0) - std::lgamma(ox + 1.0)) * std::pow(3.0, kt);
    };
    FitOrders o;
    o.dim_x = 1;
    o.total_order = 6;
    AnalyticMajorantFit f = fit_analytic_majorant(h, o, frozen::kC0);
    CHECK(f.rho_H >= 3.0);
    CHECK(f.R_H >= 1.0);
    for (int kt = 0; kt <= 6; ++kt)
        for (int kx = 0; kt + kx <= 6; ++kx) {
            double binom = std::exp(std::lgamma(kt + kx + 1.0) - std::lgamma(kt + 1.0) - std::lgamma(kx + 1.0));
            double bound = f.C_H * frozen::kC0 / ((kt + kx) * (kt + kx) + 1.0) * binom * std::pow(f.R_H, kx) * std::pow(f.rho_H, kt);
            CHECK(h(kt, {kx}, {}) <= bound * (1.0 + 1e-12));
        }
}
