#pragma once

#include <string>
#include <vector>

#include "gvi/propagator.hpp"

namespace gvi {

// Everything the source operators need at one eps.
struct SolverContext {
    const SymbolFamily* family = nullptr;
    const PropagatorModes* propagator = nullptr;
    const ENorm* norm = nullptr;
    double eps = 0.0;
    bool couplings = true;
};

struct FreeSolution {
    TrigSeries f;
    double M = 0.0;
    Eigen::VectorXcd e_plus;
    Eigen::VectorXcd e_minus;
};

// h = e^{-M} (e^{-i theta} e+ + e^{i theta} e-), propagated to every grid time.
FreeSolution build_free_solution(const SymbolSpectrum& spec, const PropagatorModes& P, double M);

// Datum with a single constant mode-0 coefficient, propagated.
TrigSeries propagate_datum(const PropagatorModes& P, const TrigSeries& datum_at_zero);

// poly(eps s, x, eps u) restricted to terms of u-degree >= min_u_degree, applied to w.
TrigSeries apply_poly(const MatrixPoly& poly, const TrigSeries& u, const TrigSeries& w, double eps,
                      int min_u_degree);

// Kernels of the three source operators.
TrigSeries kernel_theta(const SolverContext& ctx, const TrigSeries& u);
TrigSeries kernel_x(const SolverContext& ctx, const TrigSeries& u);
TrigSeries kernel_u(const SolverContext& ctx, const TrigSeries& u);

// int_0^s U(s', s) G(s') ds' by the trapezoid rule on the propagator grid.
TrigSeries duhamel(const PropagatorModes& P, const TrigSeries& G);

TrigSeries op_T_theta(const SolverContext& ctx, const TrigSeries& u);
TrigSeries op_T_x(const SolverContext& ctx, const TrigSeries& u);
TrigSeries op_T_u(const SolverContext& ctx, const TrigSeries& u);
// T = T_theta + T_x + T_u; zero when couplings are off
TrigSeries op_T(const SolverContext& ctx, const TrigSeries& u);

// omega^{-(m-1)} (beta^{-1} eps |||f||| + R rho^{-1})
double contraction_constant(double omega, int m, double beta, double eps, double norm_f, double R, double rho);

struct PicardOptions {
    double tol = 1e-8;
    int j_max = 60;
    bool enforce_hypotheses = true;  // K < 1/2 and |||u||| < 1, else throw
    double K_eps = 0.0;              // supplied by the caller
};

struct PicardTraceRow {
    int j = 0;
    double residual = 0.0;
    double norm_u = 0.0;
};

struct PicardState {
    TrigSeries u;
    double residual = 0.0;
    double K_eps = 0.0;
    int iterations = 0;
    double norm_f = 0.0;
    double norm_u_minus_f = 0.0;
    double max_residual_ratio = 0.0;  // over the geometric tail (residual < 1)
    bool converged = false;
    bool norm_escaped = false;
    bool K_too_large = false;
    std::vector<PicardTraceRow> trace;

    std::string trace_json() const;
};

PicardState picard_solve(const SolverContext& ctx, const TrigSeries& f, const PicardOptions& opts);

struct LowerBoundReport {
    double C_eps = 0.0;
    double min_envelope_ratio = 0.0;  // min |u| / envelope
    bool envelope_pass = false;
    int samples = 0;
};

// Pointwise comparison of u and f on grid times in (s_bar - window, s_bar],
// |x| < r, 16 equispaced theta.
LowerBoundReport lower_bound_check(const TrigSeries& u, const TrigSeries& f, const RateFunction& rate, double r,
                                   double omega, int m, double M, const Eigen::VectorXcd& e_plus,
                                   double window = 1.0, int x_count = 5);

}  // namespace gvi
