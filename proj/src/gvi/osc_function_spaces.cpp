#include "gvi/osc_function_spaces.hpp"

#include <cmath>

namespace gvi {

TrigSeries::TrigSeries(int n_theta, int dim_x, int trunc_order, int size, std::vector<double> time_grid)
    : n_theta_(n_theta), dim_x_(dim_x), trunc_(trunc_order), size_(size) {
    require(n_theta >= 0, ErrorCode::invalid_argument, "Fourier truncation must be non-negative");
    require(size >= 1, ErrorCode::invalid_argument, "vector size must be positive");
    modes_.assign(2 * n_theta + 1, PowerSeriesX(dim_x, trunc_order, size, 1, std::move(time_grid)));
}

bool TrigSeries::compatible(const TrigSeries& o) const {
    return n_theta_ == o.n_theta_ && dim_x_ == o.dim_x_ && trunc_ == o.trunc_ && modes_[0].same_grid(o.modes_[0]);
}

bool TrigSeries::is_zero() const {
    for (const auto& m : modes_)
        if (!m.is_zero()) return false;
    return true;
}

double TrigSeries::max_abs() const {
    double v = 0.0;
    for (const auto& m : modes_) v = std::max(v, m.max_abs());
    return v;
}

Eigen::VectorXcd TrigSeries::evaluate(const std::vector<double>& x, double theta, int t) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size_);
    for (int n = -n_theta_; n <= n_theta_; ++n) {
        const auto& m = mode(n);
        out += std::polar(1.0, n * theta) * m.evaluate(x, t).col(0);
    }
    return out;
}

TrigSeries TrigSeries::component(int i) const {
    require(i >= 0 && i < size_, ErrorCode::invalid_argument, "component index out of range");
    TrigSeries out(n_theta_, dim_x_, trunc_, 1, modes_[0].time_grid());
    int ni = modes_[0].n_index();
    for (int n = -n_theta_; n <= n_theta_; ++n)
        for (int t = 0; t < n_times(); ++t)
            for (int k = 0; k < ni; ++k) out.mode(n).at(t, k) = mode(n).at(t, k, i);
    return out;
}

namespace {

void check_same(const TrigSeries& a, const TrigSeries& b) {
    require(a.dim_x() == b.dim_x() && a.trunc_order() == b.trunc_order() && a.n_theta() == b.n_theta(),
            ErrorCode::shape_mismatch, "trigonometric series truncations differ");
    require(a.mode(0).same_grid(b.mode(0)), ErrorCode::grid_mismatch, "trigonometric series grids differ");
}

}  // namespace

TrigSeries ts_add(const TrigSeries& a, const TrigSeries& b) {
    check_same(a, b);
    require(a.size() == b.size(), ErrorCode::shape_mismatch, "vector sizes differ");
    TrigSeries out = a;
    for (int n = -a.n_theta(); n <= a.n_theta(); ++n) {
        auto& d = out.mode(n).data();
        const auto& e = b.mode(n).data();
        for (size_t i = 0; i < d.size(); ++i) d[i] += e[i];
    }
    out.real = a.real && b.real;
    return out;
}

TrigSeries ts_sub(const TrigSeries& a, const TrigSeries& b) { return ts_add(a, ts_scale(b, -1.0)); }

TrigSeries ts_scale(const TrigSeries& a, cplx s) {
    TrigSeries out = a;
    for (int n = -a.n_theta(); n <= a.n_theta(); ++n)
        for (auto& v : out.mode(n).data()) v *= s;
    out.real = a.real && s.imag() == 0.0;
    return out;
}

TrigSeries ts_product(const TrigSeries& u, const TrigSeries& v) {
    check_same(u, v);
    int nu = u.size(), nv = v.size();
    require(nu == nv || nu == 1 || nv == 1, ErrorCode::shape_mismatch, "vector sizes incompatible for product");
    int size = std::max(nu, nv);
    int N = u.n_theta();
    TrigSeries out(N, u.dim_x(), u.trunc_order(), size, u.mode(0).time_grid());
    const IndexSet& idx = u.indices();
    int nt = u.n_times();
    int ni = idx.size();
    for (int n = -N; n <= N; ++n) {
        PowerSeriesX& o = out.mode(n);
        for (int p = std::max(-N, n - N); p <= std::min(N, n + N); ++p) {
            int q = n - p;
            const PowerSeriesX& a = u.mode(p);
            const PowerSeriesX& b = v.mode(q);
            if (a.is_zero() || b.is_zero()) continue;
            for (int t = 0; t < nt; ++t) {
                for (int r = 0; r < ni; ++r) {
                    cplx* dst = o.block(t, r);
                    for (const auto& [i, j] : idx.pairs(r)) {
                        const cplx* x = a.block(t, i);
                        const cplx* y = b.block(t, j);
                        for (int c = 0; c < size; ++c) dst[c] += x[nu == 1 ? 0 : c] * y[nv == 1 ? 0 : c];
                    }
                }
            }
        }
    }
    out.real = u.real && v.real;
    return out;
}

TrigSeries ts_apply_matrix(const Eigen::MatrixXcd& m, const TrigSeries& v) {
    require(m.cols() == v.size(), ErrorCode::shape_mismatch, "matrix does not act on the series");
    int rows = static_cast<int>(m.rows());
    TrigSeries out(v.n_theta(), v.dim_x(), v.trunc_order(), rows, v.mode(0).time_grid());
    int ni = v.indices().size();
    for (int n = -v.n_theta(); n <= v.n_theta(); ++n) {
        const PowerSeriesX& a = v.mode(n);
        if (a.is_zero()) continue;
        PowerSeriesX& o = out.mode(n);
        for (int t = 0; t < v.n_times(); ++t)
            for (int k = 0; k < ni; ++k) {
                Eigen::Map<const Eigen::VectorXcd> x(a.block(t, k), v.size());
                Eigen::Map<Eigen::VectorXcd> y(o.block(t, k), rows);
                y.noalias() = m * x;
            }
    }
    return out;
}

TrigSeries apply_dtheta(const TrigSeries& u) {
    TrigSeries out = u;
    for (int n = -u.n_theta(); n <= u.n_theta(); ++n)
        for (auto& v : out.mode(n).data()) v *= cplx(0.0, static_cast<double>(n));
    return out;
}

TrigSeries apply_dx(const TrigSeries& u, int axis, bool keep_order) {
    int K = keep_order ? u.trunc_order() : std::max(0, u.trunc_order() - 1);
    TrigSeries out(u.n_theta(), u.dim_x(), K, u.size(), u.mode(0).time_grid());
    for (int n = -u.n_theta(); n <= u.n_theta(); ++n) {
        PowerSeriesX d = ps_derive(u.mode(n), axis);
        out.mode(n) = keep_order ? ps_retruncate(d, K) : d;
    }
    out.real = u.real;
    return out;
}

void validate(const SpaceNormParams& p) {
    require(p.R > 0.0 && p.rho > 0.0 && p.beta > 0.0, ErrorCode::invalid_argument, "R, rho, beta must be positive");
    require(p.M_prime > 0.0, ErrorCode::invalid_argument, "M' must be positive");
    require(p.omega >= 0.0, ErrorCode::invalid_argument, "omega must be non-negative");
    require(!(p.rate_case == RateCase::GENERAL && p.m > 1 && p.omega <= 0.0), ErrorCode::invalid_argument,
            "omega > 0 required for GENERAL with m > 1");
    require(p.c0 > 0.0 && p.c1 > 0.0, ErrorCode::invalid_argument, "constants c0, c1 must be positive");
    require(p.eps >= 0.0, ErrorCode::invalid_argument, "eps must be non-negative");
}

double mode_bracket(int n, ModeBracket b) {
    if (b == ModeBracket::MAX1) return std::max(1.0, std::abs(static_cast<double>(n)));
    return std::sqrt(static_cast<double>(n) * n + 1.0);
}

double gamma_rate(double tau, const SpaceNormParams& p) {
    switch (p.rate_case) {
    case RateCase::GENERAL: return p.gamma0 + p.eps * tau + 1.0 / p.R + p.omega + p.beta;
    case RateCase::SEMISIMPLE: return p.gamma0 + p.eps * tau + 1.0 / p.R + p.beta;
    case RateCase::MAXIMAL: return p.gamma0 + p.beta;
    }
    return 0.0;
}

double integral_gamma(double s, const SpaceNormParams& p) {
    switch (p.rate_case) {
    case RateCase::GENERAL: return (p.gamma0 + 1.0 / p.R + p.omega + p.beta) * s + 0.5 * p.eps * s * s;
    case RateCase::SEMISIMPLE: return (p.gamma0 + 1.0 / p.R + p.beta) * s + 0.5 * p.eps * s * s;
    case RateCase::MAXIMAL: return (p.gamma0 + p.beta) * s;
    }
    return 0.0;
}

double weight(int n, double s, const SpaceNormParams& p) {
    if (s > p.s_bar * (1.0 + 1e-12)) fail(ErrorCode::domain, "weight requested past the final time");
    return p.c1 / (static_cast<double>(n) * n + 1.0) *
           std::exp(-(p.M_prime - integral_gamma(s, p)) * mode_bracket(n, p.bracket));
}

TimeBudget growth_time(const SpaceNormParams& p, int grid_steps) {
    require(grid_steps >= 1, ErrorCode::invalid_argument, "grid_steps must be positive");
    double rate0 = gamma_rate(0.0, p);
    require(rate0 > 0.0, ErrorCode::invalid_argument, "growth rate must be positive");
    double lo = 0.0, hi = p.M_prime / rate0;
    while (integral_gamma(hi, p) < p.M_prime) hi *= 2.0;
    while (hi - lo > 1e-12 * hi) {
        double mid = 0.5 * (lo + hi);
        if (integral_gamma(mid, p) < p.M_prime) lo = mid;
        else hi = mid;
    }
    TimeBudget b;
    b.s_bar_1 = 0.5 * (lo + hi);
    double reg = (p.eps > 0.0) ? 1.0 / (p.eps * p.rho) : std::numeric_limits<double>::infinity();
    b.regularity_limited = reg < b.s_bar_1;
    b.s_bar = std::min(b.s_bar_1, reg);
    b.grid_step = b.s_bar / grid_steps;
    return b;
}

std::vector<double> uniform_grid(double s_end, int steps) {
    std::vector<double> g(steps + 1);
    for (int j = 0; j <= steps; ++j) g[j] = s_end * j / steps;
    g[steps] = s_end;
    return g;
}

ENorm::ENorm(const SpaceNormParams& p, int dim_x, int trunc_order, int n_theta, const std::vector<double>& grid)
    : p_(p), n_theta_(n_theta), grid_(grid) {
    validate(p);
    idx_ = IndexSet::get(dim_x, trunc_order);
    int nt = grid.empty() ? 1 : static_cast<int>(grid.size());
    int ni = idx_->size();
    valid_.assign(nt, true);
    phi_.assign(static_cast<size_t>(nt) * ni, 0.0);
    weight_.assign(static_cast<size_t>(nt) * (2 * n_theta + 1), 0.0);
    std::vector<double> mult(ni);
    for (int i = 0; i < ni; ++i) mult[i] = std::exp(std::lgamma(idx_->order(i) + 1.0) - idx_->log_factorials(i));
    for (int t = 0; t < nt; ++t) {
        double s = grid.empty() ? 0.0 : grid[t];
        double tt = p.eps * s;
        if (p.rho * tt >= 1.0 - 1e-12 || s > p.s_bar * (1.0 + 1e-12)) {
            valid_[t] = false;
            continue;
        }
        for (int o = 0; o <= trunc_order; ++o) {
            double g = phi_order_coefficient(o, tt, p.R, p.rho, p.c0);
            for (int i = idx_->order_begin(o); i < idx_->order_begin(o + 1); ++i)
                phi_[static_cast<size_t>(t) * ni + i] = mult[i] * g;
        }
        for (int n = -n_theta; n <= n_theta; ++n) weight_[static_cast<size_t>(t) * (2 * n_theta + 1) + n + n_theta] = weight(n, s, p);
    }
}

double ENorm::envelope(int n, int t, int index) const {
    return weight_[static_cast<size_t>(t) * (2 * n_theta_ + 1) + n + n_theta_] *
           phi_[static_cast<size_t>(t) * idx_->size() + index];
}

double ENorm::norm_s(const TrigSeries& v, int t) const {
    require(v.n_theta() <= n_theta_, ErrorCode::shape_mismatch, "series has more modes than the norm");
    require(t >= 0 && t < static_cast<int>(valid_.size()), ErrorCode::invalid_argument, "time index out of range");
    if (!valid_[t]) fail(ErrorCode::domain, "norm requested where eps*rho*s >= 1");
    const IndexSet& ix = v.indices();
    require(ix.dim() == idx_->dim() && ix.trunc() <= idx_->trunc(), ErrorCode::shape_mismatch,
            "series truncation exceeds the norm tables");
    int vt = v.mode(0).has_grid() ? t : 0;
    double best = 0.0;
    for (int n = -v.n_theta(); n <= v.n_theta(); ++n) {
        const PowerSeriesX& m = v.mode(n);
        if (m.is_zero()) continue;
        for (int i = 0; i < ix.size(); ++i) {
            const cplx* b = m.block(vt, i);
            double mx = 0.0;
            for (int c = 0; c < v.size(); ++c) mx = std::max(mx, std::abs(b[c]));
            if (mx == 0.0) continue;
            best = std::max(best, mx / envelope(n, t, i));
        }
    }
    return best;
}

double ENorm::norm(const TrigSeries& u) const {
    int nt = u.n_times();
    require(nt == static_cast<int>(valid_.size()), ErrorCode::grid_mismatch, "series grid differs from norm grid");
    double best = 0.0;
    for (int t = 0; t < nt; ++t)
        if (valid_[t]) best = std::max(best, norm_s(u, t));
    return best;
}

int ENorm::argmax_time(const TrigSeries& u) const {
    int arg = -1;
    double best = -1.0;
    for (int t = 0; t < u.n_times(); ++t) {
        if (!valid_[t]) continue;
        double v = norm_s(u, t);
        if (v > best) {
            best = v;
            arg = t;
        }
    }
    return arg;
}

double norm_Es(const TrigSeries& v, int t, const SpaceNormParams& p) {
    const auto& g = v.mode(0).time_grid();
    std::vector<double> one{g.empty() ? 0.0 : g[t]};
    ENorm e(p, v.dim_x(), v.trunc_order(), v.n_theta(), one);
    TrigSeries snap(v.n_theta(), v.dim_x(), v.trunc_order(), v.size());
    for (int n = -v.n_theta(); n <= v.n_theta(); ++n) snap.mode(n) = v.mode(n).has_grid() ? v.mode(n).snapshot(t) : v.mode(n);
    return e.norm_s(snap, 0);
}

double norm_E(const TrigSeries& u, const SpaceNormParams& p) {
    ENorm e(p, u.dim_x(), u.trunc_order(), u.n_theta(), u.mode(0).time_grid());
    return e.norm(u);
}

}  // namespace gvi
