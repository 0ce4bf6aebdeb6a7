#include "gvi/propagator.hpp"

#include <cmath>

#include <json.hpp>

#include "gvi/parallel.hpp"

namespace gvi {

AbarProvider abar_from_symbol(const SymbolFamily& fam, double eps, int trunc) {
    MatrixPoly P = fam.principal();
    return [P, eps, trunc](double s) { return P.x_series(eps * s, trunc); };
}

AbarProvider abar_from_snapshots(const PowerSeriesX& snapshots) {
    require(snapshots.has_grid(), ErrorCode::grid_mismatch, "snapshot interpolation needs a time grid");
    return [snapshots](double s) {
        const auto& g = snapshots.time_grid();
        require(s >= g.front() - 1e-12 && s <= g.back() * (1.0 + 1e-12) + 1e-12, ErrorCode::domain,
                "time outside the snapshot grid");
        size_t k = static_cast<size_t>(std::upper_bound(g.begin(), g.end(), s) - g.begin());
        k = std::min(std::max<size_t>(k, 1), g.size() - 1);
        double w = (s - g[k - 1]) / (g[k] - g[k - 1]);
        PowerSeriesX a = snapshots.snapshot(static_cast<int>(k - 1));
        PowerSeriesX b = snapshots.snapshot(static_cast<int>(k));
        return ps_add(ps_scale(a, 1.0 - w), ps_scale(b, w));
    };
}

PropagatorModes::PropagatorModes(int n_theta, int dim_x, int trunc, int size, std::vector<double> grid)
    : n_theta_(n_theta), dim_x_(dim_x), trunc_(trunc), size_(size), grid_(std::move(grid)) {
    require(grid_.size() >= 2, ErrorCode::invalid_argument, "propagator grid needs at least two times");
    from0_.assign(2 * n_theta + 1, PowerSeriesX(dim_x, trunc, size, size, grid_));
    step_.assign(2 * n_theta + 1, std::vector<PowerSeriesX>(grid_.size() - 1));
}

PowerSeriesX series_matvec(const PowerSeriesX& M, const PowerSeriesX& v) {
    require(M.cols() == v.rows(), ErrorCode::shape_mismatch, "matrix series does not act on vector series");
    require(M.trunc_order() == v.trunc_order() && M.dim_x() == v.dim_x(), ErrorCode::shape_mismatch,
            "series truncations differ");
    PowerSeriesX out(v.dim_x(), v.trunc_order(), M.rows(), v.cols());
    ps_mul_slice(v.indices(), M.block(0, 0), M.rows(), M.cols(), v.block(0, 0), v.cols(), out.block(0, 0));
    return out;
}

PowerSeriesX PropagatorModes::two_time(int n, int j0, int j1) const {
    require(0 <= j0 && j0 <= j1 && j1 < static_cast<int>(grid_.size()), ErrorCode::invalid_argument,
            "two-time propagator needs s' <= s on the grid");
    PowerSeriesX U = ps_constant(dim_x_, trunc_, Eigen::MatrixXcd::Identity(size_, size_));
    for (int j = j0; j < j1; ++j) U = series_matvec(step(n, j), U);
    return U;
}

namespace {

PowerSeriesX rhs(const AbarProvider& abar, int n, double s, const PowerSeriesX& Y) {
    PowerSeriesX A = abar(s);
    PowerSeriesX out(Y.dim_x(), Y.trunc_order(), Y.rows(), Y.cols());
    ps_mul_slice(Y.indices(), A.block(0, 0), A.rows(), A.cols(), Y.block(0, 0), Y.cols(), out.block(0, 0));
    cplx f(0.0, static_cast<double>(n));
    for (auto& v : out.data()) v *= f;
    return out;
}

void axpy(PowerSeriesX& y, const PowerSeriesX& x, cplx a) {
    auto& d = y.data();
    const auto& e = x.data();
    for (size_t i = 0; i < d.size(); ++i) d[i] += a * e[i];
}

PowerSeriesX rk4(const AbarProvider& abar, int n, double s, double h, const PowerSeriesX& Y) {
    PowerSeriesX k1 = rhs(abar, n, s, Y);
    PowerSeriesX t = Y;
    axpy(t, k1, 0.5 * h);
    PowerSeriesX k2 = rhs(abar, n, s + 0.5 * h, t);
    t = Y;
    axpy(t, k2, 0.5 * h);
    PowerSeriesX k3 = rhs(abar, n, s + 0.5 * h, t);
    t = Y;
    axpy(t, k3, h);
    PowerSeriesX k4 = rhs(abar, n, s + h, t);
    PowerSeriesX out = Y;
    axpy(out, k1, h / 6.0);
    axpy(out, k2, h / 3.0);
    axpy(out, k3, h / 3.0);
    axpy(out, k4, h / 6.0);
    return out;
}

PowerSeriesX step_rec(const AbarProvider& abar, int n, double s, double h, const PowerSeriesX& Y,
                      const PropagatorOptions& opts, int depth, StepDiagnostics& diag) {
    PowerSeriesX full = rk4(abar, n, s, h, Y);
    PowerSeriesX half = rk4(abar, n, s + 0.5 * h, 0.5 * h, rk4(abar, n, s, 0.5 * h, Y));
    double err = 0.0;
    for (size_t i = 0; i < half.data().size(); ++i) err = std::max(err, std::abs(half.data()[i] - full.data()[i]));
    err /= 15.0;
    if (err > opts.ode_tol * std::max(1.0, half.max_abs())) {
        if (depth >= opts.max_depth) fail(ErrorCode::step_rejected, "local error above ode_tol at maximal refinement");
        PowerSeriesX mid = step_rec(abar, n, s, 0.5 * h, Y, opts, depth + 1, diag);
        return step_rec(abar, n, s + 0.5 * h, 0.5 * h, mid, opts, depth + 1, diag);
    }
    diag.max_error = std::max(diag.max_error, err);
    diag.max_depth = std::max(diag.max_depth, depth);
    diag.steps += 1;
    axpy(half, ps_add(half, ps_scale(full, -1.0)), 1.0 / 15.0);
    return half;
}

}  // namespace

PowerSeriesX propagate_step(const AbarProvider& abar, int n, double s, double h, const PowerSeriesX& Y,
                            const PropagatorOptions& opts, StepDiagnostics* diag) {
    StepDiagnostics local;
    PowerSeriesX out = step_rec(abar, n, s, h, Y, opts, 0, diag ? *diag : local);
    return out;
}

PropagatorModes integrate_modes(const AbarProvider& abar, int n_theta, const std::vector<double>& grid, int dim_x,
                                int trunc, int size, const PropagatorOptions& opts) {
    PropagatorModes P(n_theta, dim_x, trunc, size, grid);
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(size, size);
    PowerSeriesX id = ps_constant(dim_x, trunc, I);
    int steps = P.n_steps();
    std::vector<StepDiagnostics> diags(2 * n_theta + 1);
    parallel_for(2 * n_theta + 1, opts.threads, [&](int slot) {
        int n = slot - n_theta;
        PowerSeriesX& U0 = P.from_origin(n);
        int bs = size * size;
        int ni = id.n_index();
        std::copy(id.data().begin(), id.data().end(), U0.block(0, 0));
        PowerSeriesX cur = id;
        for (int j = 0; j < steps; ++j) {
            if (n == 0) {
                P.step(n, j) = id;
            } else {
                P.step(n, j) = propagate_step(abar, n, grid[j], grid[j + 1] - grid[j], id, opts, &diags[slot]);
                cur = series_matvec(P.step(n, j), cur);
            }
            std::copy(cur.data().begin(), cur.data().begin() + static_cast<size_t>(ni) * bs, U0.block(j + 1, 0));
        }
    });
    for (const auto& d : diags) {
        P.diagnostics.max_error = std::max(P.diagnostics.max_error, d.max_error);
        P.diagnostics.max_depth = std::max(P.diagnostics.max_depth, d.max_depth);
        P.diagnostics.steps += d.steps;
    }
    return P;
}

std::vector<std::vector<double>> ball_samples(int dim, double radius, int count) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    require(dim >= 1 && dim <= 8, ErrorCode::invalid_argument, "ball sampling supports 1 <= d <= 8");
    std::vector<std::vector<double>> pts;
    pts.push_back(std::vector<double>(dim, 0.0));
    double r = 0.999 * radius;
    for (int i = 1; static_cast<int>(pts.size()) < count && i < 1000000; ++i) {
        std::vector<double> p(dim);
        double nrm = 0.0;
        for (int a = 0; a < dim; ++a) {
            double h = 0.0, f = 1.0;
            for (int k = i; k > 0; k /= primes[a]) {
                f /= primes[a];
                h += f * (k % primes[a]);
            }
            p[a] = (2.0 * h - 1.0);
            nrm += p[a] * p[a];
        }
        if (nrm >= 1.0) continue;
        for (auto& v : p) v *= r;
        pts.push_back(p);
    }
    return pts;
}

std::string GrowthReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = argmax_n;
    j["C_star"] = C_star;
    j["uncorrected"] = uncorrected;
    j["argmax"] = {{"s", argmax_s}, {"x", argmax_x}};
    j["C_cap"] = C_cap;
    j["pass"] = pass;
    return j.dump(2);
}

GrowthReport verify_growth_bound(const PropagatorModes& P, const RateFunction& rate, double omega, int m,
                                 const std::vector<std::vector<double>>& x_samples, double R_inv, double C_cap) {
    GrowthReport rep;
    rep.C_cap = C_cap;
    double pref = std::pow(omega, -(m - 1));
    const auto& grid = P.grid();
    for (const auto& x : x_samples) {
        double nrm = 0.0;
        for (double v : x) nrm += v * v;
        if (R_inv > 0.0 && std::sqrt(nrm) >= R_inv)
            fail(ErrorCode::domain, "sample point outside the ball of radius 1/R");
    }
    for (int n = -P.n_theta(); n <= P.n_theta(); ++n) {
        const PowerSeriesX& U = P.from_origin(n);
        for (int j = 0; j < static_cast<int>(grid.size()); ++j) {
            double growth = std::exp(std::abs(n) * rate.int_sharp(grid[j]));
            for (const auto& x : x_samples) {
                Eigen::MatrixXcd M = U.evaluate(x, j);
                double nu = Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0);
                double c = nu / (pref * growth);
                rep.uncorrected = std::max(rep.uncorrected, nu / growth);
                if (c > rep.C_star) {
                    rep.C_star = c;
                    rep.argmax_n = n;
                    rep.argmax_s = grid[j];
                    rep.argmax_x = x;
                }
            }
        }
    }
    rep.pass = rep.C_star <= C_cap;
    return rep;
}

TrigSeries apply_propagator(const PropagatorModes& P, const TrigSeries& v, int j0, int j1) {
    require(v.size() == P.size() && v.trunc_order() == P.trunc_order() && v.n_theta() <= P.n_theta(),
            ErrorCode::shape_mismatch, "series shape does not match the propagator");
    TrigSeries out(v.n_theta(), v.dim_x(), v.trunc_order(), v.size());
    int vt = v.mode(0).has_grid() ? j0 : 0;
    for (int n = -v.n_theta(); n <= v.n_theta(); ++n) {
        if (v.mode(n).is_zero()) continue;
        PowerSeriesX snap = v.mode(n).has_grid() ? v.mode(n).snapshot(vt) : v.mode(n);
        out.mode(n) = series_matvec(P.two_time(n, j0, j1), snap);
    }
    out.real = v.real;
    return out;
}

}  // namespace gvi
