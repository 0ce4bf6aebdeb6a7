#pragma once

#include <limits>
#include <vector>

#include "gvi/majorant_series.hpp"

namespace gvi {

// Fourier series in theta, truncated to |n| <= n_theta, whose modes are
// vector-valued (size x 1) x-series sharing one time grid.
class TrigSeries {
public:
    TrigSeries() = default;
    TrigSeries(int n_theta, int dim_x, int trunc_order, int size, std::vector<double> time_grid = {});

    int n_theta() const { return n_theta_; }
    int dim_x() const { return dim_x_; }
    int trunc_order() const { return trunc_; }
    int size() const { return size_; }
    int n_times() const { return modes_.empty() ? 0 : modes_[0].n_times(); }
    const std::vector<double>& time_grid() const { return modes_[0].time_grid(); }
    const IndexSet& indices() const { return modes_[0].indices(); }

    PowerSeriesX& mode(int n) { return modes_[n + n_theta_]; }
    const PowerSeriesX& mode(int n) const { return modes_[n + n_theta_]; }

    bool real = false;  // u_{-n} = conj(u_n) is expected, not enforced

    bool compatible(const TrigSeries& o) const;
    bool is_zero() const;
    double max_abs() const;
    // sum_n e^{i n theta} u_n(x) at time index t
    Eigen::VectorXcd evaluate(const std::vector<double>& x, double theta, int t) const;
    // scalar series holding component i
    TrigSeries component(int i) const;

private:
    int n_theta_ = 0;
    int dim_x_ = 0;
    int trunc_ = 0;
    int size_ = 1;
    std::vector<PowerSeriesX> modes_;
};

TrigSeries ts_add(const TrigSeries& a, const TrigSeries& b);
TrigSeries ts_sub(const TrigSeries& a, const TrigSeries& b);
TrigSeries ts_scale(const TrigSeries& a, cplx s);
// Fourier convolution of entrywise series products; a scalar factor broadcasts.
TrigSeries ts_product(const TrigSeries& u, const TrigSeries& v);
// constant matrix applied to every coefficient
TrigSeries ts_apply_matrix(const Eigen::MatrixXcd& m, const TrigSeries& v);
TrigSeries apply_dtheta(const TrigSeries& u);
// d/dx_axis (axis 0-based); the result is truncated one order lower unless
// keep_order, in which case the missing top order is zero.
TrigSeries apply_dx(const TrigSeries& u, int axis, bool keep_order = false);

// Bracket <n> used in the weights.
enum class ModeBracket { SQRT, MAX1 };

struct SpaceNormParams {
    double R = 1.0;
    double rho = 1.0;
    double M_prime = 1.0;
    double beta = 1.0;
    double omega = 0.0;
    int m = 1;
    double eps = 0.0;
    RateCase rate_case = RateCase::SEMISIMPLE;
    double gamma0 = 1.0;
    double c0 = 0.0;
    double c1 = 0.0;
    ModeBracket bracket = ModeBracket::SQRT;
    double s_bar = std::numeric_limits<double>::infinity();
};

void validate(const SpaceNormParams& p);
double mode_bracket(int n, ModeBracket b);
// gamma(tau) = gamma_sharp(tau) + beta and its integral over [0, s]
double gamma_rate(double tau, const SpaceNormParams& p);
double integral_gamma(double s, const SpaceNormParams& p);
// c1/(n^2+1) exp(-(M' - int_0^s gamma) <n>)
double weight(int n, double s, const SpaceNormParams& p);

struct TimeBudget {
    double s_bar_1 = 0.0;
    double s_bar = 0.0;
    double grid_step = 0.0;
    bool regularity_limited = false;
};

TimeBudget growth_time(const SpaceNormParams& p, int grid_steps = 512);
std::vector<double> uniform_grid(double s_end, int steps);

// Weighted sup norms on a fixed grid; Phi_k(eps s) and the weights are
// tabulated once. Times with eps*rho*s >= 1 are skipped by norm_E.
class ENorm {
public:
    ENorm(const SpaceNormParams& p, int dim_x, int trunc_order, int n_theta, const std::vector<double>& grid);

    double norm_s(const TrigSeries& v, int t) const;
    double norm(const TrigSeries& u) const;
    int argmax_time(const TrigSeries& u) const;
    bool time_valid(int t) const { return valid_[t]; }
    const SpaceNormParams& params() const { return p_; }
    double envelope(int n, int t, int index) const;

private:
    SpaceNormParams p_;
    int n_theta_;
    std::vector<double> grid_;
    std::shared_ptr<const IndexSet> idx_;
    std::vector<bool> valid_;
    std::vector<double> phi_;     // [t][index]
    std::vector<double> weight_;  // [t][n + n_theta]
};

double norm_Es(const TrigSeries& v, int t, const SpaceNormParams& p);
double norm_E(const TrigSeries& u, const SpaceNormParams& p);

}  // namespace gvi
