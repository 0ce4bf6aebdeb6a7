#include "gvi/gevrey_metrology.hpp"

#include "gvi/principal_symbol.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gvi {

const char* schedule_name(Schedule s) { return s == Schedule::LITERAL ? "literal" : "consistent"; }

Schedule schedule_from_name(const std::string& name) {
    if (name == "literal") return Schedule::LITERAL;
    if (name == "consistent") return Schedule::CONSISTENT;
    fail(ErrorCode::config, "unknown schedule " + name);
}

SpaceNormParams ScenarioParams::space(double c0, double c1) const {
    SpaceNormParams p;
    p.R = R;
    p.rho = rho;
    p.M_prime = M_prime;
    p.beta = beta;
    p.omega = omega;
    p.m = m;
    p.eps = eps;
    p.rate_case = rate_case;
    p.gamma0 = gamma0;
    p.c0 = c0;
    p.c1 = c1;
    p.s_bar = s_bar;
    return p;
}

ScenarioParams select_parameters(double eps, double delta, RateCase rate_case, int m, double gamma0,
                                 Schedule schedule) {
    require(eps > 0.0 && eps < 1.0, ErrorCode::invalid_argument, "eps must lie in (0, 1)");
    require(m >= 1, ErrorCode::invalid_argument, "multiplicity must be >= 1");
    double ceiling = gevrey_ceiling(rate_case, m);
    if (!(delta > 0.0 && delta < ceiling)) {
        std::ostringstream os;
        os << "delta = " << delta << " outside (0, " << ceiling << ") for case " << rate_case_name(rate_case);
        fail(ErrorCode::index_out_of_range, os.str());
    }
    ScenarioParams p;
    p.eps = eps;
    p.delta = delta;
    p.rate_case = rate_case;
    p.m = m;
    p.gamma0 = gamma0;
    p.schedule = schedule;
    double L = std::abs(std::log(eps));
    p.M = std::pow(eps, -delta);
    p.beta = std::pow(eps, delta);
    switch (rate_case) {
    case RateCase::GENERAL:
        p.omega = std::pow(eps, delta);
        p.R = std::pow(eps, -delta);
        p.rho = std::pow(eps, -(1.0 + (m - 1) * delta) / 2.0);
        p.M_prime = p.M - std::min(0.0, 1.0 - (2 * m - 1) * delta) * L;
        break;
    case RateCase::SEMISIMPLE:
    case RateCase::MAXIMAL:
        p.omega = rate_case == RateCase::SEMISIMPLE ? 0.0 : 1.0;
        if (schedule == Schedule::LITERAL) {
            p.R = 1.0 / eps;
            p.rho = std::pow(eps, -(1.0 - delta / 2.0));
        } else if (rate_case == RateCase::SEMISIMPLE) {
            p.R = std::pow(eps, -delta);
            p.rho = std::pow(eps, -0.5);
        } else {
            p.R = std::pow(eps, -(1.0 - delta) / 3.0);
            p.rho = std::pow(eps, -2.0 * (1.0 - delta) / 3.0);
        }
        p.M_prime = p.M - (1.0 - delta) * L;
        break;
    }
    if (!(p.M_prime > 0.0)) {
        std::ostringstream os;
        os << "M' = " << p.M_prime << " is not positive at eps = " << eps;
        fail(ErrorCode::domain, os.str());
    }
    SpaceNormParams sp = p.space(1.0, 1.0);
    TimeBudget tb = growth_time(sp);
    p.s_bar_1 = tb.s_bar_1;
    p.s_bar = tb.s_bar;
    p.regularity_limited = tb.regularity_limited;
    double scale = p.s_bar * std::pow(eps, delta);
    p.s_bar_off_scale = !(scale >= 0.5 && scale <= 2.0);
    return p;
}

GevreyNorm gevrey_norm_oscillatory(double eps, double sigma, double c, double amplitude, double M) {
    require(eps > 0.0 && sigma > 0.0 && c > 0.0, ErrorCode::invalid_argument, "eps, sigma, c must be positive");
    GevreyNorm g;
    double lead = std::log(amplitude * eps) - M;
    g.closed_form = std::exp(lead + std::pow(eps, -sigma) / (sigma * std::pow(c, sigma)));
    g.k_cap = 4 * static_cast<int>(std::ceil(std::pow(eps, -sigma) * std::pow(c, -sigma)));
    double lec = std::log(eps * c);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= g.k_cap; ++k) {
        double v = -k * lec - std::lgamma(k + 1.0) / sigma;
        // exact ties go to the larger k despite lgamma rounding
        if (v >= best - 1e-12 * std::max(1.0, std::abs(best))) {
            best = std::max(best, v);
            g.argmax_k = k;
        }
    }
    g.direct = std::exp(lead + best);
    return g;
}

double gevrey_norm_from_derivatives(const std::vector<double>& bounds, double sigma, double c) {
    double best = 0.0;
    for (size_t k = 0; k < bounds.size(); ++k) {
        if (bounds[k] <= 0.0) continue;
        double v = std::log(bounds[k]) - k * std::log(c) - std::lgamma(k + 1.0) / sigma;
        best = std::max(best, std::exp(v));
    }
    return best;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    require(n >= 1, ErrorCode::invalid_argument, "quadrature needs at least one point");
    // Golub-Welsch: eigenpairs of the Jacobi matrix of the Legendre recurrence
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(n);
    weights.resize(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()(i);
        double v = es.eigenvectors()(0, i);
        weights[i] = 2.0 * v * v;
    }
    // symmetrize to remove eigen-solver asymmetry
    for (int i = 0; i < n / 2; ++i) {
        double x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        double w = 0.5 * (weights[i] + weights[n - 1 - i]);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

namespace {

struct Panels {
    std::vector<double> x, w;
};

Panels panel_rule(double a, double b, double width, int max_panels, const std::vector<double>& gx,
                  const std::vector<double>& gw) {
    Panels p;
    if (!(b > a)) return p;
    int count = 1;
    if (width > 0.0) count = std::min(max_panels, std::max(1, static_cast<int>(std::ceil((b - a) / width))));
    double h = (b - a) / count;
    p.x.reserve(count * gx.size());
    p.w.reserve(count * gx.size());
    for (int k = 0; k < count; ++k) {
        double lo = a + k * h;
        for (size_t i = 0; i < gx.size(); ++i) {
            p.x.push_back(lo + 0.5 * h * (gx[i] + 1.0));
            p.w.push_back(0.5 * h * gw[i]);
        }
    }
    return p;
}

}  // namespace

double l2_norm_on_cone(const PhysicalField& u_sq, int d, double R, double rho, const ConeQuadrature& q) {
    require(R > 0.0 && rho > 0.0, ErrorCode::invalid_argument, "R and rho must be positive");
    require(d == 1 || d == 2, ErrorCode::invalid_argument, "cone quadrature supports d = 1 and d = 2");
    std::vector<double> gx, gw;
    gauss_legendre(q.points, gx, gw);
    double T = 1.0 / rho;
    if (q.t_max > 0.0) T = std::min(T, q.t_max);
    Panels tp = panel_rule(0.0, T, q.t_panel, q.max_panels, gx, gw);
    // split x at 0 so the kink of |x|_1 falls on a panel edge
    double sum = 0.0;
    std::vector<double> x(d);
    for (size_t it = 0; it < tp.x.size(); ++it) {
        double t = tp.x[it];
        double a = (1.0 - rho * t) / R;
        double inner = 0.0;
        for (int side : {-1, 1}) {
            Panels xp = panel_rule(0.0, a, q.x_panel, q.max_panels, gx, gw);
            for (size_t ix = 0; ix < xp.x.size(); ++ix) {
                x[0] = side * xp.x[ix];
                if (d == 1) {
                    inner += xp.w[ix] * u_sq(t, x);
                } else {
                    double b = a - xp.x[ix];
                    for (int side2 : {-1, 1}) {
                        Panels yp = panel_rule(0.0, b, q.x_panel, q.max_panels, gx, gw);
                        for (size_t iy = 0; iy < yp.x.size(); ++iy) {
                            x[1] = side2 * yp.x[iy];
                            inner += xp.w[ix] * yp.w[iy] * u_sq(t, x);
                        }
                    }
                }
            }
        }
        sum += tp.w[it] * inner;
    }
    return std::sqrt(sum);
}

double predicted_envelope(double eps, int d, double delta, int m, double alpha, double c, double sigma) {
    double p = 1.0 + (d + 1) / 2.0 - delta * (2 * m + 1) - alpha;
    return std::exp(p * std::log(eps) - alpha * c * std::pow(eps, -sigma) + alpha * std::pow(eps, -delta));
}

InstabilityRow instability_ratio(double norm_u_l2, double norm_h, const ScenarioParams& p, int d) {
    require(norm_h > 0.0, ErrorCode::invalid_argument, "datum norm must be positive");
    InstabilityRow r;
    r.ratio = norm_u_l2 / std::pow(norm_h, p.alpha);
    r.envelope = predicted_envelope(p.eps, d, p.delta, p.m, p.alpha, p.c, p.sigma);
    return r;
}

}  // namespace gvi
