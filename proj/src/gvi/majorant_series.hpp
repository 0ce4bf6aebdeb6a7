#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gvi/common.hpp"

namespace gvi {

using MultiIndex = std::vector<int>;

int order_of(const MultiIndex& k);

// Graded-lexicographic enumeration of {k in N^d : |k| <= K}, shared between
// all series of the same (d, K).
class IndexSet {
public:
    static std::shared_ptr<const IndexSet> get(int dim, int trunc);

    IndexSet(int dim, int trunc);

    int dim() const { return dim_; }
    int trunc() const { return trunc_; }
    int size() const { return static_cast<int>(indices_.size()); }
    const MultiIndex& index(int i) const { return indices_[i]; }
    int order(int i) const { return orders_[i]; }
    int order_begin(int o) const { return order_begin_[o]; }
    int find(const MultiIndex& k) const;
    // position of k + 1_axis, or -1 when it leaves the set
    int shift(int i, int axis) const { return shift_[i * dim_ + axis]; }
    // sum_j log(k_j!)
    double log_factorials(int i) const { return log_fact_[i]; }
    // (p, q) pairs with k_p + k_q = k_r, p ascending
    const std::vector<std::pair<int, int>>& pairs(int r) const;

private:
    int rank(const MultiIndex& k) const;

    int dim_;
    int trunc_;
    std::vector<MultiIndex> indices_;
    std::vector<int> orders_;
    std::vector<int> order_begin_;
    std::vector<int> shift_;
    std::vector<double> log_fact_;
    mutable std::vector<std::vector<std::pair<int, int>>> pairs_;
    mutable std::once_flag pairs_once_;
};

// Truncated series sum_k phi_k x^k with (rows x cols) complex coefficients,
// optionally one snapshot per time of a strictly increasing grid.
// Storage order: [time][index][row][col].
class PowerSeriesX {
public:
    PowerSeriesX() = default;
    PowerSeriesX(int dim_x, int trunc_order, int rows = 1, int cols = 1,
                 std::vector<double> time_grid = {});

    int dim_x() const { return dim_x_; }
    int trunc_order() const { return trunc_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int block_size() const { return rows_ * cols_; }
    bool has_grid() const { return !grid_.empty(); }
    const std::vector<double>& time_grid() const { return grid_; }
    int n_times() const { return grid_.empty() ? 1 : static_cast<int>(grid_.size()); }
    int n_index() const { return idx_ ? idx_->size() : 0; }
    const IndexSet& indices() const { return *idx_; }
    std::shared_ptr<const IndexSet> index_set() const { return idx_; }

    cplx* block(int t, int i) { return data_.data() + (static_cast<size_t>(t) * n_index() + i) * block_size(); }
    const cplx* block(int t, int i) const { return data_.data() + (static_cast<size_t>(t) * n_index() + i) * block_size(); }
    cplx& at(int t, int i, int r = 0, int c = 0) { return block(t, i)[r * cols_ + c]; }
    cplx at(int t, int i, int r = 0, int c = 0) const { return block(t, i)[r * cols_ + c]; }

    cplx coeff(const MultiIndex& k, int r = 0, int c = 0, int t = 0) const;
    void set_coeff(const MultiIndex& k, cplx v, int r = 0, int c = 0, int t = 0);

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    bool same_grid(const PowerSeriesX& o) const { return grid_ == o.grid_; }
    bool is_zero() const;
    double max_abs() const;

    PowerSeriesX snapshot(int t) const;
    // sum over stored k of phi_k(t) x^k, accumulated by total degree
    Eigen::MatrixXcd evaluate(const std::vector<double>& x, int t = 0) const;

private:
    int dim_x_ = 0;
    int trunc_ = 0;
    int rows_ = 1;
    int cols_ = 1;
    std::vector<double> grid_;
    std::shared_ptr<const IndexSet> idx_;
    std::vector<cplx> data_;
};

PowerSeriesX ps_mul(const PowerSeriesX& a, const PowerSeriesX& b);
// out += a * b on one time slice, all three stored on idx; a is rows x inner,
// b is inner x cols. Same summation order as ps_mul.
void ps_mul_slice(const IndexSet& idx, const cplx* a, int rows, int inner, const cplx* b, int cols,
                  cplx* out);
PowerSeriesX ps_derive(const PowerSeriesX& a, int axis);
PowerSeriesX ps_add(const PowerSeriesX& a, const PowerSeriesX& b);
PowerSeriesX ps_scale(const PowerSeriesX& a, cplx s);
// Re-truncate to order K (new coefficients are zero when K grows).
PowerSeriesX ps_retruncate(const PowerSeriesX& a, int trunc);
// Series whose single coefficient at k = 0 is the given matrix.
PowerSeriesX ps_constant(int dim_x, int trunc, const Eigen::MatrixXcd& m,
                         std::vector<double> grid = {});

// C * Phi(R X + rho t), Phi(z) = sum_k c0 z^k / (k^2 + 1).
struct ModelMajorant {
    double C = 1.0;
    double R = 1.0;
    double rho = 0.0;
    double c0 = 0.0;
    int p_trunc = 1 << 22;
};

// R^|k| sum_p c0 / ((|k|+p)^2+1) multinomial(|k|+p; k, p) (rho t)^p; C is not applied.
double phi_coefficient(const MultiIndex& k, double t, const ModelMajorant& m,
                       double rel_tol = 1e-12, int* p_used = nullptr);

// Same with k = (o, 0, ..., 0); Phi_k = multinomial(|k|; k) * phi_order_coefficient(|k|).
double phi_order_coefficient(int order, double t, double R, double rho, double c0,
                             double rel_tol = 1e-12, int p_max = 1 << 22,
                             int* p_used = nullptr);

// Phi_k(t_j) for every k of an index set and every time of a list.
class PhiTable {
public:
    PhiTable() = default;
    PhiTable(std::shared_ptr<const IndexSet> idx, const std::vector<double>& times,
             double R, double rho, double c0, double rel_tol = 1e-12);
    double operator()(int t, int i) const { return values_[static_cast<size_t>(t) * n_index_ + i]; }
    int n_times() const { return n_times_; }

private:
    int n_index_ = 0;
    int n_times_ = 0;
    std::vector<double> values_;
};

struct MajorizeReport {
    bool holds = true;
    double worst_ratio = 0.0;
    MultiIndex worst_k;
    double worst_t = 0.0;
    int worst_time_index = -1;
    int worst_row = -1;
    int worst_col = -1;
};

// Entrywise |phi_k(t)| <= C Phi_k(t) on every stored k and every t.
// A gridless phi is compared at each t with its single snapshot; a gridded phi
// must have one snapshot per t.
MajorizeReport majorizes(const PowerSeriesX& phi, const ModelMajorant& m,
                         const std::vector<double>& times);

// |phi_k| <= psi_k entrywise, psi scalar and non-negative; orders beyond
// either truncation are ignored.
MajorizeReport dominates(const PowerSeriesX& phi, const PowerSeriesX& psi);

// One-variable model series truncated at K (c0 z^k/(k^2+1) coefficients).
PowerSeriesX phi_series_1d(int trunc, double c0);

// (k^2+1) sum_{p=0}^{k} 1/((p^2+1)((k-p)^2+1))
double c0_bracket(int k);
// (n^2+1) sum_{|p|<=W} 1/((p^2+1)((n-p)^2+1)) and its rigorous tail bound for W >= 2|n|
double c1_bracket_window(int n, int window);
double c1_bracket_tail_bound(int n, int window);
int c1_default_window(int n);
double c1_bracket_upper(int n);

struct SweepResult {
    double value = 0.0;
    double bracket_max = 0.0;
    int argmax = 0;
};

constexpr double kConstantSafety = 0.99;

SweepResult derive_c0(int k_max, int threads = 1);
SweepResult derive_c1(int n_max, int threads = 1);

struct UniversalConstants {
    double c0 = 0.0;
    double c1 = 0.0;
    int k_max = 0;
    int n_max = 0;
    std::string timestamp;
};

UniversalConstants derive_constants(int k_max, int n_max, int threads = 1);
// The project's canonical constants, frozen from derive_constants(100000, 10000).
const UniversalConstants& canonical_constants();
std::string constants_to_json(const UniversalConstants& c);
UniversalConstants constants_from_json(const std::string& text);
void save_constants(const UniversalConstants& c, const std::string& path);
UniversalConstants load_constants(const std::string& path);

// Coefficient oracle H_{k1,k2,k3} (t-order, x-multi-index, u-multi-index),
// returning the max-norm of the coefficient.
using CoefficientOracle = std::function<double(int, const MultiIndex&, const MultiIndex&)>;

struct FitOrders {
    int dim_x = 0;
    int dim_u = 0;
    bool has_t = true;
    int total_order = 6;
    int ladder_max = 10;  // ladder 2^0 .. 2^ladder_max
};

struct AnalyticMajorantFit {
    double C_H = 0.0;
    double R_H = 1.0;
    double rho_H = 1.0;
    double a_H = 1.0;
    double top_ratio = 0.0;
    double inner_ratio = 0.0;
};

AnalyticMajorantFit fit_analytic_majorant(const CoefficientOracle& oracle, const FitOrders& orders,
                                          double c0);

}  // namespace gvi
