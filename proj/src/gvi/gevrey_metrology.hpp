#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gvi/osc_function_spaces.hpp"

namespace gvi {

enum class Schedule { LITERAL, CONSISTENT };

const char* schedule_name(Schedule s);
Schedule schedule_from_name(const std::string& name);

struct ScenarioParams {
    double eps = 0.0;
    double delta = 0.0;
    double sigma = 0.0;
    double c = 1.0;
    double alpha = 1.0;
    RateCase rate_case = RateCase::SEMISIMPLE;
    int m = 1;
    double gamma0 = 1.0;
    Schedule schedule = Schedule::LITERAL;

    double omega = 0.0;
    double beta = 0.0;
    double R = 0.0;
    double rho = 0.0;
    double M = 0.0;
    double M_prime = 0.0;
    double s_bar_1 = 0.0;
    double s_bar = 0.0;
    bool regularity_limited = false;
    bool s_bar_off_scale = false;

    SpaceNormParams space(double c0, double c1) const;
};

// Throws INDEX_OUT_OF_RANGE when delta is not below the case ceiling.
ScenarioParams select_parameters(double eps, double delta, RateCase rate_case, int m, double gamma0 = 1.0,
                                 Schedule schedule = Schedule::LITERAL);

struct GevreyNorm {
    double closed_form = 0.0;
    double direct = 0.0;
    int argmax_k = 0;
    int k_cap = 0;
};

GevreyNorm gevrey_norm_oscillatory(double eps, double sigma, double c, double amplitude, double M);

// sup_k |d^k a| c^{-k} / (k!)^{1/sigma} from derivative bounds |d^k a| <= bounds[k]
double gevrey_norm_from_derivatives(const std::vector<double>& bounds, double sigma, double c);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

using PhysicalField = std::function<double(double t, const std::vector<double>& x)>;

struct ConeQuadrature {
    int points = 32;
    double t_max = -1.0;    // restrict to t <= t_max when positive
    double t_panel = -1.0;  // panel widths; <= 0 means one panel
    double x_panel = -1.0;
    int max_panels = 4096;
};

// ||u||_{L^2(Omega)} with Omega = {R |x|_1 + rho t < 1, t >= 0}, d in {1, 2};
// field returns |u(t,x)|^2
double l2_norm_on_cone(const PhysicalField& u_sq, int d, double R, double rho, const ConeQuadrature& q = {});

// eps^{1 + (d+1)/2 - delta(2m+1) - alpha} exp(-alpha c eps^{-sigma} + alpha eps^{-delta})
double predicted_envelope(double eps, int d, double delta, int m, double alpha, double c, double sigma);

struct InstabilityRow {
    double ratio = 0.0;
    double envelope = 0.0;
};

InstabilityRow instability_ratio(double norm_u_l2, double norm_h, const ScenarioParams& p, int d);

}  // namespace gvi
