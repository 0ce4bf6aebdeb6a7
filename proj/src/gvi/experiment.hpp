#pragma once

#include <string>
#include <vector>

#include "gvi/fixed_point_solver.hpp"
#include "gvi/gevrey_metrology.hpp"

namespace gvi {

struct ScenarioConfig {
    std::string model;
    double delta = 0.0;
    double sigma = 0.0;
    double c = 1.0;
    double alpha = 1.0;
    std::vector<double> eps_sweep;
    int K_x = 12;
    int N_theta = 8;
    int grid_steps = 512;
    double ode_tol = 1e-10;
    double picard_tol = 1e-8;
    double C_cap = 10.0;
    std::string output = "sweep";
    Schedule schedule = Schedule::LITERAL;
    bool strict_hypotheses = false;
    bool couplings = true;
    int j_max = 60;
    double r = -1.0;  // lower-bound ball radius; <= 0 means eps
    int seed = 0;
};

ScenarioConfig config_from_json(const std::string& text, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);
// canonical dump of every field, used for hashing
std::string config_to_json(const ScenarioConfig& cfg);

SymbolFamily resolve_model(const std::string& model, const std::string& base_dir = ".");

// Physical field eps * u(t/eps, x, x.xi0/eps) with cubic interpolation in s.
class AnsatzField {
public:
    AnsatzField(const TrigSeries& u, double eps, std::vector<double> xi0);
    Eigen::VectorXcd operator()(double t, const std::vector<double>& x);

private:
    void prepare(double s);

    const TrigSeries& u_;
    double eps_;
    std::vector<double> xi0_;
    double cached_s_ = -1.0;
    std::vector<PowerSeriesX> modes_;
};

// least-squares slope of log max_theta |f(s, 0, theta)| over the grid
double growth_exponent(const TrigSeries& f);

struct RowResult {
    ScenarioParams params;
    std::string status = "ok";
    double K_eps = 0.0;
    double norm_h_closed = 0.0;
    double norm_h_direct = 0.0;
    double norm_u_L2 = 0.0;
    double norm_f_L2 = 0.0;
    double ratio = 0.0;
    double envelope = 0.0;
    double growth_fit = 0.0;
    int picard_iters = 0;
    double norm_f_E = 0.0;
    double norm_u_minus_f_E = 0.0;
    double max_residual_ratio = 0.0;
    double C_eps = 0.0;
    double C_star = 0.0;
    bool envelope_pass = false;
    std::vector<std::string> flags;
    double wall_seconds = 0.0;

    std::string csv_line() const;
};

std::string csv_header();

struct RunContext {
    const ScenarioConfig* config = nullptr;
    const SymbolFamily* family = nullptr;
    const AssumptionReport* symbol = nullptr;
    UniversalConstants constants;
};

// Full pipeline at one eps; Errors propagate only in strict mode.
RowResult run_scenario(const RunContext& ctx, double eps);

struct SweepSummary {
    std::vector<RowResult> rows;
    std::string csv_path;
    std::string manifest_path;
    int reused_rows = 0;
    ErrorCode first_error = ErrorCode::invalid_argument;
    bool has_error = false;
    std::string to_json() const;
};

SweepSummary run_sweep(const ScenarioConfig& cfg, const UniversalConstants& constants, const std::string& out_prefix,
                       int threads, const std::string& base_dir = ".");

struct ReportCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SweepReport {
    int rows = 0;
    std::vector<ReportCheck> checks;
    double ratio_log_slope = 0.0;  // d log(ratio) / d log(eps)
    double growth_fit_min = 0.0;
    double growth_fit_max = 0.0;
    bool all_pass() const;
    std::string to_json() const;
};

SweepReport report_csv(const std::string& csv_text);

}  // namespace gvi
