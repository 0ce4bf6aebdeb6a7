#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gvi/osc_function_spaces.hpp"
#include "gvi/principal_symbol.hpp"

namespace gvi {

// A-bar(eps s, x) as an N x N x-series (gridless) for a given s.
using AbarProvider = std::function<PowerSeriesX(double)>;

AbarProvider abar_from_symbol(const SymbolFamily& fam, double eps, int trunc);
// Piecewise-linear interpolation between gridded snapshots.
AbarProvider abar_from_snapshots(const PowerSeriesX& snapshots);

struct PropagatorOptions {
    double ode_tol = 1e-10;
    int max_depth = 12;
    int threads = 1;
};

struct StepDiagnostics {
    double max_error = 0.0;  // largest accepted Richardson estimate
    int max_depth = 0;
    long steps = 0;
};

// U_n(0, s_j, x) for |n| <= n_theta on a grid, together with the one-step
// factors U_n(s_j, s_{j+1}).
class PropagatorModes {
public:
    PropagatorModes() = default;
    PropagatorModes(int n_theta, int dim_x, int trunc, int size, std::vector<double> grid);

    int n_theta() const { return n_theta_; }
    int dim_x() const { return dim_x_; }
    int trunc_order() const { return trunc_; }
    int size() const { return size_; }
    const std::vector<double>& grid() const { return grid_; }
    int n_steps() const { return static_cast<int>(grid_.size()) - 1; }

    // gridded N x N series U_n(0, s_j)
    const PowerSeriesX& from_origin(int n) const { return from0_[n + n_theta_]; }
    PowerSeriesX& from_origin(int n) { return from0_[n + n_theta_]; }
    const PowerSeriesX& step(int n, int j) const { return step_[n + n_theta_][j]; }
    PowerSeriesX& step(int n, int j) { return step_[n + n_theta_][j]; }
    // U_n(s_{j0}, s_{j1}) as an ordered product of one-step factors
    PowerSeriesX two_time(int n, int j0, int j1) const;

    StepDiagnostics diagnostics;

private:
    int n_theta_ = 0;
    int dim_x_ = 0;
    int trunc_ = 0;
    int size_ = 0;
    std::vector<double> grid_;
    std::vector<PowerSeriesX> from0_;
    std::vector<std::vector<PowerSeriesX>> step_;
};

PropagatorModes integrate_modes(const AbarProvider& abar, int n_theta, const std::vector<double>& grid,
                                int dim_x, int trunc, int size, const PropagatorOptions& opts = {});

// One RK4/Richardson step of dU/ds = i n A-bar(s) U from Y at s to s + h.
PowerSeriesX propagate_step(const AbarProvider& abar, int n, double s, double h, const PowerSeriesX& Y,
                            const PropagatorOptions& opts, StepDiagnostics* diag = nullptr);

// Matrix x-series product on a single snapshot: M * v.
PowerSeriesX series_matvec(const PowerSeriesX& M, const PowerSeriesX& v);

std::vector<std::vector<double>> ball_samples(int dim, double radius, int count);

struct GrowthReport {
    double C_star = 0.0;
    double uncorrected = 0.0;  // max |U_n| / exp(|n| int gamma_sharp)
    int argmax_n = 0;
    double argmax_s = 0.0;
    std::vector<double> argmax_x;
    double C_cap = 10.0;
    bool pass = false;

    std::string to_json() const;
};

GrowthReport verify_growth_bound(const PropagatorModes& P, const RateFunction& rate, double omega, int m,
                                 const std::vector<std::vector<double>>& x_samples, double R_inv,
                                 double C_cap = 10.0);

// U(s_{j0}, s_{j1}) applied mode-wise to the snapshot of v at j0.
TrigSeries apply_propagator(const PropagatorModes& P, const TrigSeries& v, int j0, int j1);

}  // namespace gvi
