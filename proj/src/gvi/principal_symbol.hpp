#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gvi/majorant_series.hpp"

namespace gvi {

// c * t^a x^b u^c with an N x N complex coefficient.
struct PolyTerm {
    int t_exp = 0;
    std::vector<int> x_exp;
    std::vector<int> u_exp;
    Eigen::MatrixXcd coeff;

    int u_degree() const;
};

// Matrix-valued polynomial in (t, x_1..x_d, u_1..u_N).
class MatrixPoly {
public:
    MatrixPoly() = default;
    MatrixPoly(int d, int n) : d_(d), n_(n) {}

    int dim_x() const { return d_; }
    int size() const { return n_; }
    const std::vector<PolyTerm>& terms() const { return terms_; }
    void add_term(PolyTerm term);

    Eigen::MatrixXcd eval(double t, const std::vector<double>& x, const Eigen::VectorXcd& u) const;
    Eigen::MatrixXcd eval_tx(double t, const std::vector<double>& x) const;
    // derivative in variable v: 0 is t, 1..d are x_1..x_d (u excluded)
    MatrixPoly derivative(int v) const;
    // terms with u-degree 0, as an x-series at time t
    PowerSeriesX x_series(double t, int trunc) const;
    bool has_u_degree_zero() const;
    MatrixPoly scaled(double s) const;
    MatrixPoly plus(const MatrixPoly& o) const;

private:
    int d_ = 0;
    int n_ = 0;
    std::vector<PolyTerm> terms_;
};

struct SymbolFamily {
    std::string name;
    int d = 1;
    int N = 2;
    std::vector<MatrixPoly> A;  // one per x_j
    MatrixPoly F;               // source f(t,x,u) = F(t,x,u) u
    std::vector<double> xi0;

    // A(t,x,u) = sum_j A_j xi0_j
    MatrixPoly principal() const;
    // A-bar(t,x) = A(t,x,0) as an N x N x-series at time t
    PowerSeriesX abar_series(double t, int trunc) const;
    Eigen::MatrixXcd abar(double t, const std::vector<double>& x) const;
};

SymbolFamily builtin_model(const std::string& name);
std::vector<std::string> builtin_model_names();
SymbolFamily symbol_from_json(const std::string& text);
SymbolFamily load_symbol(const std::string& path);
std::string symbol_to_json(const SymbolFamily& fam);

struct SymbolTolerances {
    double imag_tol = 1e-10;
    double cluster_radius = 1e-6;
    double gap_tol = 1e-8;
    double def_tol = 1e-8;
    double rank_tol = 1e-8;
    double continuation_radius = 0.1;
    int continuation_steps = 16;
};

enum class MuStatus { OK, CONDITION_I_VIOLATED, SIGN_FAIL, AMBIGUOUS, NOT_APPLICABLE };
const char* mu_status_name(MuStatus s);

struct SymbolSpectrum {
    cplx lambda0;
    double gamma0 = 0.0;
    int m = 0;
    Eigen::VectorXcd e_plus;
    Eigen::MatrixXcd P0;
    Eigen::MatrixXcd A0_partial_inverse;
    Eigen::VectorXcd eigenvalues;
    bool strictly_maximal = false;
    bool semisimple = false;
    bool noncoalescing = false;
    double min_gap = 0.0;
    std::string continuation_note;
    MuStatus mu_status = MuStatus::NOT_APPLICABLE;
    Eigen::MatrixXcd mu;  // (d+1) x (d+1) when computed
    RateCase rate_case = RateCase::GENERAL;
};

// NOT_ELLIPTIC when every eigenvalue of A0 is real within imag_tol.
SymbolSpectrum check_ellipticity(const SymbolFamily& fam, const SymbolTolerances& tol = {});

struct NoncoalescenceReport {
    bool semisimple = false;
    bool noncoalescing = false;
    double min_gap = 0.0;
    bool continuation_lost = false;
    std::string note;
};

NoncoalescenceReport check_semisimple_noncoalescing(const SymbolFamily& fam, SymbolSpectrum& spec,
                                                    const SymbolTolerances& tol = {});

// Mean of the m eigenvalues of A-bar(t,x) continued from lambda0 along the
// segment from the origin. Throws CONTINUATION_LOST on ambiguity.
cplx lambda_branch(const SymbolFamily& fam, const SymbolSpectrum& spec, double t, const std::vector<double>& x,
                   const SymbolTolerances& tol = {});

MuStatus compute_mu_and_check_sign(const SymbolFamily& fam, SymbolSpectrum& spec, const SymbolTolerances& tol = {});

bool check_quadratic_source(const SymbolFamily& fam);

struct AssumptionReport {
    SymbolSpectrum spectrum;
    NoncoalescenceReport noncoalescence;
    bool quadratic_source = false;
    double gevrey_ceiling = 0.0;
};

// Full chain; throws NOT_ELLIPTIC when the spectrum is real.
AssumptionReport analyze_symbol(const SymbolFamily& fam, const SymbolTolerances& tol = {});
std::string assumption_report_json(const AssumptionReport& rep);
double gevrey_ceiling(RateCase c, int m);

class RateFunction {
public:
    RateFunction() = default;
    RateFunction(RateCase c, double gamma0, double eps, double R_inv, double r, double omega);

    // MAXIMAL lower rate from a tracked branch; tabulated over [0, s_max]
    void attach_branch(const SymbolFamily& fam, const SymbolSpectrum& spec, double s_max, int samples = 2048,
                       const SymbolTolerances& tol = {});

    RateCase rate_case() const { return case_; }
    double omega() const { return omega_; }
    double sharp(double tau) const;
    double flat(double tau) const;
    double int_sharp(double s) const;
    double int_flat(double s) const;

private:
    double branch_im(double tau) const;

    RateCase case_ = RateCase::SEMISIMPLE;
    double gamma0_ = 0.0, eps_ = 0.0, R_inv_ = 0.0, r_ = 0.0, omega_ = 0.0;
    std::vector<double> tab_tau_, tab_im_, tab_int_;
};

RateFunction make_rates(const SymbolSpectrum& spec, double R_inv, double r, double omega, double eps);

}  // namespace gvi
