#include <doctest.h>

#include <cmath>

#include "gvi/constants_frozen.hpp"
#include "gvi/fixed_point_solver.hpp"

using namespace gvi;

namespace {

Eigen::MatrixXcd scalar(cplx v) { return Eigen::MatrixXcd::Constant(1, 1, v); }

// A = i (elliptic, constant), F = kappa / eps so that eps F u = kappa u
SymbolFamily linear_toy(double kappa, double eps) {
    SymbolFamily f;
    f.name = "toy";
    f.d = 1;
    f.N = 1;
    f.xi0 = {1.0};
    MatrixPoly A(1, 1);
    A.add_term({0, {0}, {0}, scalar(cplx(0.0, 1.0))});
    f.A = {A};
    f.F = MatrixPoly(1, 1);
    f.F.add_term({0, {0}, {0}, scalar(kappa / eps)});
    return f;
}

SpaceNormParams loose_params(double eps, double s_end) {
    SpaceNormParams p;
    p.R = 1.0;
    p.rho = 1.0;
    p.M_prime = 50.0;
    p.beta = 1.0;
    p.eps = eps;
    p.c0 = frozen::kC0;
    p.c1 = frozen::kC1;
    p.s_bar = s_end;
    return p;
}


}  // namespace

TEST_CASE("duhamel integrates a constant source under the identity propagator") {
    SymbolFamily fam = linear_toy(0.0, 0.1);
    std::vector<double> g = uniform_grid(2.0, 40);
    PropagatorModes P = integrate_modes(abar_from_symbol(fam, 0.1, 2), 1, g, 1, 2, 1);
    TrigSeries G(1, 1, 2, 1, g);
    for (int j = 0; j <= 40; ++j) G.mode(0).at(j, 1) = 3.0;
    TrigSeries T = duhamel(P, G);
    for (int j = 0; j <= 40; ++j) CHECK(std::abs(T.mode(0).at(j, 1) - 3.0 * g[j]) < 1e-12);
    std::vector<double> bad = g;
    bad[3] += 1e-3;
    TrigSeries H(1, 1, 2, 1, bad);
    CHECK_THROWS_AS(duhamel(P, H), Error);
}

TEST_CASE("scalar exponential toy: Picard limit is h e^{kappa s}") {
    double eps = 0.1, kappa = 0.5, h = 0.25;
    SymbolFamily fam = linear_toy(kappa, eps);
    std::vector<double> g = uniform_grid(2.0, 4000);
    PropagatorModes P = integrate_modes(abar_from_symbol(fam, eps, 2), 1, g, 1, 2, 1);
    ENorm E(loose_params(eps, g.back()), 1, 2, 1, g);
    SolverContext ctx{&fam, &P, &E, eps, true};
    TrigSeries datum(1, 1, 2, 1);
    datum.mode(0).at(0, 0) = h;
    TrigSeries f = propagate_datum(P, datum);
    CHECK(ts_sub(op_T_u(ctx, ts_scale(f, 0.0)), ts_scale(f, 0.0)).is_zero());
    // T_u reproduces int_0^s kappa u
    TrigSeries Tu = op_T_u(ctx, f);
    CHECK(std::abs(Tu.mode(0).at(4000, 0) - kappa * h * 2.0) < 1e-12);
    CHECK(op_T_theta(ctx, f).is_zero());
    CHECK(op_T_x(ctx, f).is_zero());
    PicardOptions po;
    po.enforce_hypotheses = false;
    po.tol = 1e-12;
    PicardState st = picard_solve(ctx, f, po);
    CHECK(st.converged);
    double worst = 0.0;
    for (int j = 0; j <= 4000; j += 100)
        worst = std::max(worst, std::abs(st.u.mode(0).at(j, 0) - h * std::exp(kappa * g[j])) / (h * std::exp(kappa * g[j])));
    CHECK(worst < 1e-6);
    // residual ratios shrink like (kappa s)^j / j!
    CHECK(st.trace.size() >= 3);
    CHECK(st.trace[2].residual < st.trace[1].residual);
}

TEST_CASE("couplings off: one iteration, u = f, no lower-bound defect") {
    SymbolFamily fam = builtin_model("cauchy-riemann");
    AssumptionReport rep = analyze_symbol(fam);
    double eps = 1.0 / 64.0;
    std::vector<double> g = uniform_grid(1.0, 32);
    PropagatorModes P = integrate_modes(abar_from_symbol(fam, eps, 4), 2, g, 1, 4, 2);
    ENorm E(loose_params(eps, g.back()), 1, 4, 2, g);
    SolverContext ctx{&fam, &P, &E, eps, false};
    FreeSolution fs = build_free_solution(rep.spectrum, P, 2.0);
    PicardOptions po;
    po.enforce_hypotheses = false;
    PicardState st = picard_solve(ctx, fs.f, po);
    CHECK(st.iterations == 1);
    CHECK(st.converged);
    CHECK(ts_sub(st.u, fs.f).is_zero());
    RateFunction rate = make_rates(rep.spectrum, eps, eps, 0.0, eps);
    LowerBoundReport lb = lower_bound_check(st.u, fs.f, rate, eps, 0.0, 1, 2.0, rep.spectrum.e_plus);
    CHECK(lb.C_eps == 0.0);
    CHECK(lb.envelope_pass);
}

TEST_CASE("free solution: datum at s = 0 and e^s growth") {
    SymbolFamily fam = builtin_model("cauchy-riemann");
    AssumptionReport rep = analyze_symbol(fam);
    double eps = 1.0 / 64.0, M = 1.5;
    std::vector<double> g = uniform_grid(2.0, 32);
    PropagatorModes P = integrate_modes(abar_from_symbol(fam, eps, 2), 1, g, 1, 2, 2);
    FreeSolution fs = build_free_solution(rep.spectrum, P, M);
    const Eigen::VectorXcd& ep = rep.spectrum.e_plus;
    for (double th : {0.0, 0.7, 2.0}) {
        Eigen::VectorXcd want = std::exp(-M) * (std::polar(1.0, -th) * ep + std::polar(1.0, th) * Eigen::VectorXcd(ep.conjugate()));
        CHECK((fs.f.evaluate({0.0}, th, 0) - want).norm() < 1e-14);
    }
    double a0 = fs.f.evaluate({0.0}, 0.0, 0).norm();
    double a1 = fs.f.evaluate({0.0}, 0.0, 32).norm();
    CHECK(a1 / a0 == doctest::Approx(std::exp(2.0)).epsilon(1e-8));
}

TEST_CASE("apply_poly: quadratic source on a constant field") {
    SymbolFamily fam = builtin_model("cauchy-riemann");  // F = u1 Id
    double eps = 0.5;
    TrigSeries u(2, 1, 2, 2);
    u.mode(0).at(0, 0, 0) = 2.0;
    u.mode(0).at(0, 0, 1) = 3.0;
    // eps F(eps u) u = eps * (eps u1) u
    TrigSeries k = ts_scale(apply_poly(fam.F, u, u, eps, 0), eps);
    CHECK(std::abs(k.mode(0).at(0, 0, 0) - eps * eps * 2.0 * 2.0) < 1e-14);
    CHECK(std::abs(k.mode(0).at(0, 0, 1) - eps * eps * 2.0 * 3.0) < 1e-14);
}

TEST_CASE("strict hypotheses raise the documented errors") {
    SymbolFamily fam = linear_toy(0.5, 0.1);
    std::vector<double> g = uniform_grid(1.0, 10);
    PropagatorModes P = integrate_modes(abar_from_symbol(fam, 0.1, 2), 1, g, 1, 2, 1);
    ENorm E(loose_params(0.1, g.back()), 1, 2, 1, g);
    SolverContext ctx{&fam, &P, &E, 0.1, true};
    TrigSeries datum(1, 1, 2, 1);
    datum.mode(0).at(0, 0) = 1e-30;
    TrigSeries f = propagate_datum(P, datum);
    PicardOptions po;
    po.K_eps = 0.7;
    try {
        picard_solve(ctx, f, po);
        FAIL("K >= 1/2 accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::k_too_large);
    }
    po.K_eps = 0.1;
    po.j_max = 1;
    po.tol = 1e-30;
    try {
        picard_solve(ctx, f, po);
        FAIL("non-convergence accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::no_convergence);
    }
    CHECK(contraction_constant(0.5, 2, 0.25, 0.01, 3.0, 4.0, 8.0) == doctest::Approx(2.0 * (0.12 + 0.5)));
}
