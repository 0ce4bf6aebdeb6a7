#include "gvi/fixed_point_solver.hpp"

#include <cmath>

#include <json.hpp>

namespace gvi {

FreeSolution build_free_solution(const SymbolSpectrum& spec, const PropagatorModes& P, double M) {
    require(P.n_theta() >= 1, ErrorCode::invalid_argument, "free solution needs modes -1 and +1");
    FreeSolution fs;
    fs.M = M;
    fs.e_plus = spec.e_plus;
    fs.e_minus = spec.e_plus.conjugate();
    TrigSeries h(P.n_theta(), P.dim_x(), P.trunc_order(), P.size());
    double amp = std::exp(-M);
    for (int c = 0; c < P.size(); ++c) {
        h.mode(-1).at(0, 0, c) = amp * fs.e_plus(c);
        h.mode(1).at(0, 0, c) = amp * fs.e_minus(c);
    }
    h.real = true;
    fs.f = propagate_datum(P, h);
    return fs;
}

TrigSeries propagate_datum(const PropagatorModes& P, const TrigSeries& datum) {
    require(!datum.mode(0).has_grid(), ErrorCode::invalid_argument, "datum must be a single snapshot");
    TrigSeries f(datum.n_theta(), P.dim_x(), P.trunc_order(), P.size(), P.grid());
    int steps = static_cast<int>(P.grid().size());
    for (int n = -datum.n_theta(); n <= datum.n_theta(); ++n) {
        if (datum.mode(n).is_zero()) continue;
        const PowerSeriesX& U = P.from_origin(n);
        PowerSeriesX& dst = f.mode(n);
        int N = P.size();
        for (int j = 0; j < steps; ++j)
            ps_mul_slice(U.indices(), U.block(j, 0), N, N, datum.mode(n).block(0, 0), 1, dst.block(j, 0));
    }
    f.real = datum.real;
    return f;
}

TrigSeries apply_poly(const MatrixPoly& poly, const TrigSeries& u, const TrigSeries& w, double eps,
                      int min_u_degree) {
    require(u.compatible(w), ErrorCode::shape_mismatch, "series passed to a polynomial field differ in shape");
    const auto& grid = u.mode(0).time_grid();
    int nt = u.n_times();
    TrigSeries acc(w.n_theta(), w.dim_x(), w.trunc_order(), poly.size(), grid);
    std::vector<TrigSeries> comps;
    bool have_comps = false;
    for (const auto& term : poly.terms()) {
        int ud = term.u_degree();
        if (ud < min_u_degree) continue;
        TrigSeries S(u.n_theta(), u.dim_x(), u.trunc_order(), 1, grid);
        int k = S.indices().find(term.x_exp);
        if (k < 0) continue;
        for (int t = 0; t < nt; ++t) {
            double s = grid.empty() ? 0.0 : grid[t];
            S.mode(0).at(t, k) = std::pow(eps * s, term.t_exp);
        }
        if (ud > 0 && !have_comps) {
            for (int i = 0; i < u.size(); ++i) comps.push_back(u.component(i));
            have_comps = true;
        }
        for (int i = 0; i < u.size(); ++i)
            for (int e = 0; e < term.u_exp[i]; ++e) S = ts_product(S, comps[i]);
        if (ud > 0) S = ts_scale(S, std::pow(eps, ud));
        acc = ts_add(acc, ts_product(S, ts_apply_matrix(term.coeff, w)));
    }
    return acc;
}

TrigSeries kernel_theta(const SolverContext& ctx, const TrigSeries& u) {
    return apply_poly(ctx.family->principal(), u, apply_dtheta(u), ctx.eps, 1);
}

TrigSeries kernel_x(const SolverContext& ctx, const TrigSeries& u) {
    TrigSeries acc(u.n_theta(), u.dim_x(), u.trunc_order(), u.size(), u.mode(0).time_grid());
    for (int j = 0; j < ctx.family->d; ++j)
        acc = ts_add(acc, apply_poly(ctx.family->A[j], u, apply_dx(u, j, true), ctx.eps, 0));
    return ts_scale(acc, ctx.eps);
}

TrigSeries kernel_u(const SolverContext& ctx, const TrigSeries& u) {
    return ts_scale(apply_poly(ctx.family->F, u, u, ctx.eps, 0), ctx.eps);
}

TrigSeries duhamel(const PropagatorModes& P, const TrigSeries& G) {
    const auto& grid = P.grid();
    require(G.mode(0).time_grid() == grid, ErrorCode::grid_mismatch, "kernel grid differs from propagator grid");
    int steps = P.n_steps();
    double h = grid[1] - grid[0];
    for (int j = 1; j < steps; ++j)
        require(std::abs(grid[j + 1] - grid[j] - h) <= 1e-9 * h, ErrorCode::grid_mismatch,
                "trapezoid recursion needs a uniform grid");
    TrigSeries T(G.n_theta(), G.dim_x(), G.trunc_order(), G.size(), grid);
    int N = G.size();
    for (int n = -G.n_theta(); n <= G.n_theta(); ++n) {
        const PowerSeriesX& g = G.mode(n);
        if (g.is_zero()) continue;
        PowerSeriesX& out = T.mode(n);
        int ni = g.n_index();
        size_t len = static_cast<size_t>(ni) * N;
        std::vector<cplx> S(len), next(len);
        for (size_t e = 0; e < len; ++e) S[e] = 0.5 * h * g.block(0, 0)[e];
        for (int j = 0; j < steps; ++j) {
            std::fill(next.begin(), next.end(), cplx(0.0, 0.0));
            const PowerSeriesX& phi = P.step(n, j);
            ps_mul_slice(g.indices(), phi.block(0, 0), N, N, S.data(), 1, next.data());
            const cplx* gj = g.block(j + 1, 0);
            cplx* o = out.block(j + 1, 0);
            for (size_t e = 0; e < len; ++e) {
                next[e] += h * gj[e];
                o[e] = next[e] - 0.5 * h * gj[e];
            }
            std::swap(S, next);
        }
    }
    T.real = G.real;
    return T;
}

namespace {

TrigSeries zero_like(const TrigSeries& u) {
    return TrigSeries(u.n_theta(), u.dim_x(), u.trunc_order(), u.size(), u.mode(0).time_grid());
}

}  // namespace

TrigSeries op_T_theta(const SolverContext& ctx, const TrigSeries& u) {
    if (!ctx.couplings) return zero_like(u);
    return duhamel(*ctx.propagator, kernel_theta(ctx, u));
}

TrigSeries op_T_x(const SolverContext& ctx, const TrigSeries& u) {
    if (!ctx.couplings) return zero_like(u);
    return duhamel(*ctx.propagator, kernel_x(ctx, u));
}

TrigSeries op_T_u(const SolverContext& ctx, const TrigSeries& u) {
    if (!ctx.couplings) return zero_like(u);
    return duhamel(*ctx.propagator, kernel_u(ctx, u));
}

TrigSeries op_T(const SolverContext& ctx, const TrigSeries& u) {
    if (!ctx.couplings) return zero_like(u);
    TrigSeries G = ts_add(ts_add(kernel_theta(ctx, u), kernel_x(ctx, u)), kernel_u(ctx, u));
    return duhamel(*ctx.propagator, G);
}

double contraction_constant(double omega, int m, double beta, double eps, double norm_f, double R, double rho) {
    return std::pow(omega, -(m - 1)) * (eps * norm_f / beta + R / rho);
}

std::string PicardState::trace_json() const {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : trace)
        a.push_back({{"j", r.j}, {"residual", r.residual}, {"K_eps", K_eps}, {"norm_u", r.norm_u}});
    return a.dump();
}

PicardState picard_solve(const SolverContext& ctx, const TrigSeries& f, const PicardOptions& opts) {
    require(ctx.norm && ctx.propagator && ctx.family, ErrorCode::invalid_argument, "incomplete solver context");
    PicardState st;
    st.K_eps = opts.K_eps;
    st.norm_f = ctx.norm->norm(f);
    if (opts.K_eps >= 0.5) {
        st.K_too_large = true;
        if (opts.enforce_hypotheses) fail(ErrorCode::k_too_large, "K(eps) >= 1/2");
    }
    st.u = f;
    if (st.norm_f == 0.0) {
        st.converged = true;
        return st;
    }
    double prev = -1.0;
    for (int j = 1; j <= opts.j_max; ++j) {
        double nu = ctx.norm->norm(st.u);
        if (nu >= 1.0) {
            st.norm_escaped = true;
            if (opts.enforce_hypotheses) fail(ErrorCode::norm_escape, "iterate left the unit ball of E");
        }
        TrigSeries next = ts_add(f, op_T(ctx, st.u));
        double res = ctx.norm->norm(ts_sub(next, st.u));
        st.u = std::move(next);
        st.iterations = j;
        st.residual = res;
        st.trace.push_back({j, res, ctx.norm->norm(st.u)});
        if (prev > 0.0 && res > 0.0 && res < 1.0) st.max_residual_ratio = std::max(st.max_residual_ratio, res / prev);
        prev = res;
        if (res < opts.tol * st.norm_f) {
            st.converged = true;
            break;
        }
    }
    st.norm_u_minus_f = ctx.norm->norm(ts_sub(st.u, f));
    if (!st.converged && opts.enforce_hypotheses)
        fail(ErrorCode::no_convergence, "Picard iteration did not reach tolerance within j_max");
    return st;
}

LowerBoundReport lower_bound_check(const TrigSeries& u, const TrigSeries& f, const RateFunction& rate, double r,
                                   double omega, int m, double M, const Eigen::VectorXcd& e_plus, double window,
                                   int x_count) {
    require(u.compatible(f), ErrorCode::shape_mismatch, "solution and free solution differ in shape");
    LowerBoundReport rep;
    const auto& grid = u.mode(0).time_grid();
    double s_bar = grid.back();
    double vv = e_plus.squaredNorm();
    double vtv = std::abs(e_plus.dot(e_plus.conjugate()));
    double kappa = std::sqrt(std::max(0.0, 2.0 * vv - 2.0 * vtv));
    double pref = std::pow(omega, -(m - 1));
    auto xs = ball_samples(u.dim_x(), r, x_count);
    rep.min_envelope_ratio = std::numeric_limits<double>::infinity();
    for (int t = 0; t < static_cast<int>(grid.size()); ++t) {
        double s = grid[t];
        if (!(s > s_bar - window)) continue;
        double growth = std::exp(-M + rate.int_flat(s));
        for (const auto& x : xs)
            for (int q = 0; q < 16; ++q) {
                double theta = 2.0 * M_PI * q / 16.0;
                Eigen::VectorXcd uv = u.evaluate(x, theta, t);
                Eigen::VectorXcd fv = f.evaluate(x, theta, t);
                rep.C_eps = std::max(rep.C_eps, (uv - fv).norm() / (pref * growth));
                if (kappa > 0.0) rep.min_envelope_ratio = std::min(rep.min_envelope_ratio, uv.norm() / (kappa * growth));
                rep.samples += 1;
            }
    }
    rep.envelope_pass = rep.samples > 0 && rep.min_envelope_ratio >= 0.5;
    return rep;
}

}  // namespace gvi
