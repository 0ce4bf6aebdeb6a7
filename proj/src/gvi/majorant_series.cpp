#include "gvi/majorant_series.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gvi/constants_frozen.hpp"
#include "gvi/parallel.hpp"

namespace gvi {

int order_of(const MultiIndex& k) {
    int o = 0;
    for (int v : k) o += v;
    return o;
}

namespace {

void compositions(int remaining, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
    int d = static_cast<int>(cur.size());
    if (pos == d - 1) {
        cur[pos] = remaining;
        out.push_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        compositions(remaining - v, pos + 1, cur, out);
    }
}

}  // namespace

std::shared_ptr<const IndexSet> IndexSet::get(int dim, int trunc) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const IndexSet>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(dim, trunc);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto set = std::make_shared<const IndexSet>(dim, trunc);
    cache.emplace(key, set);
    return set;
}

IndexSet::IndexSet(int dim, int trunc) : dim_(dim), trunc_(trunc) {
    require(dim >= 0, ErrorCode::invalid_argument, "dimension must be non-negative");
    require(trunc >= 0, ErrorCode::invalid_argument, "truncation order must be non-negative");
    if (dim == 0) {
        indices_.push_back({});
        orders_.push_back(0);
        order_begin_.assign(trunc + 2, 1);
        order_begin_[0] = 0;
        log_fact_.push_back(0.0);
        return;
    }
    order_begin_.resize(trunc + 2);
    MultiIndex cur(dim, 0);
    for (int o = 0; o <= trunc; ++o) {
        order_begin_[o] = static_cast<int>(indices_.size());
        compositions(o, 0, cur, indices_);
    }
    order_begin_[trunc + 1] = static_cast<int>(indices_.size());
    orders_.resize(indices_.size());
    log_fact_.resize(indices_.size());
    for (size_t i = 0; i < indices_.size(); ++i) {
        orders_[i] = order_of(indices_[i]);
        double lf = 0.0;
        for (int v : indices_[i]) lf += std::lgamma(v + 1.0);
        log_fact_[i] = lf;
    }
    shift_.assign(indices_.size() * dim, -1);
    for (size_t i = 0; i < indices_.size(); ++i) {
        if (orders_[i] == trunc) continue;
        for (int a = 0; a < dim; ++a) {
            MultiIndex k = indices_[i];
            k[a] += 1;
            shift_[i * dim + a] = rank(k);
        }
    }
}

int IndexSet::rank(const MultiIndex& k) const {
    // position inside the order block: count compositions preceding k in
    // first-component-descending lexicographic order
    int o = order_of(k);
    int pos = order_begin_[o];
    int remaining = o;
    for (int a = 0; a + 1 < dim_; ++a) {
        int slots = dim_ - a - 1;
        for (int v = remaining; v > k[a]; --v) {
            int rest = remaining - v;
            // number of compositions of rest into `slots` parts
            double cnt = std::exp(std::lgamma(rest + slots) - std::lgamma(rest + 1.0) - std::lgamma(slots * 1.0));
            pos += static_cast<int>(std::llround(cnt));
        }
        remaining -= k[a];
    }
    return pos;
}

int IndexSet::find(const MultiIndex& k) const {
    if (static_cast<int>(k.size()) != dim_) return -1;
    for (int v : k)
        if (v < 0) return -1;
    int o = order_of(k);
    if (o > trunc_) return -1;
    if (dim_ == 0) return 0;
    if (dim_ == 1) return k[0];
    return rank(k);
}

const std::vector<std::pair<int, int>>& IndexSet::pairs(int r) const {
    std::call_once(pairs_once_, [this] {
        pairs_.assign(indices_.size(), {});
        int n = size();
        MultiIndex sum(dim_);
        for (int p = 0; p < n; ++p) {
            for (int q = 0; q < n; ++q) {
                if (orders_[p] + orders_[q] > trunc_) continue;
                for (int a = 0; a < dim_; ++a) sum[a] = indices_[p][a] + indices_[q][a];
                pairs_[find(sum)].emplace_back(p, q);
            }
        }
    });
    return pairs_[r];
}

PowerSeriesX::PowerSeriesX(int dim_x, int trunc_order, int rows, int cols, std::vector<double> time_grid)
    : dim_x_(dim_x), trunc_(trunc_order), rows_(rows), cols_(cols), grid_(std::move(time_grid)) {
    require(rows > 0 && cols > 0, ErrorCode::invalid_argument, "coefficient shape must be positive");
    for (size_t j = 1; j < grid_.size(); ++j)
        require(grid_[j] > grid_[j - 1], ErrorCode::invalid_argument, "time grid must be strictly increasing");
    idx_ = IndexSet::get(dim_x, trunc_order);
    data_.assign(static_cast<size_t>(n_times()) * idx_->size() * rows * cols, cplx(0.0, 0.0));
}

cplx PowerSeriesX::coeff(const MultiIndex& k, int r, int c, int t) const {
    int i = idx_->find(k);
    if (i < 0) return cplx(0.0, 0.0);
    return at(t, i, r, c);
}

void PowerSeriesX::set_coeff(const MultiIndex& k, cplx v, int r, int c, int t) {
    int i = idx_->find(k);
    require(i >= 0, ErrorCode::invalid_argument, "multi-index outside truncation");
    at(t, i, r, c) = v;
}

bool PowerSeriesX::is_zero() const {
    for (const auto& v : data_)
        if (v != cplx(0.0, 0.0)) return false;
    return true;
}

double PowerSeriesX::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

PowerSeriesX PowerSeriesX::snapshot(int t) const {
    PowerSeriesX out(dim_x_, trunc_, rows_, cols_);
    std::copy(block(t, 0), block(t, 0) + static_cast<size_t>(n_index()) * block_size(), out.data_.begin());
    return out;
}

Eigen::MatrixXcd PowerSeriesX::evaluate(const std::vector<double>& x, int t) const {
    require(static_cast<int>(x.size()) == dim_x_, ErrorCode::invalid_argument, "evaluation point dimension");
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows_, cols_);
    // powers x_a^e for e <= K
    std::vector<double> pw(static_cast<size_t>(dim_x_) * (trunc_ + 1), 1.0);
    for (int a = 0; a < dim_x_; ++a)
        for (int e = 1; e <= trunc_; ++e) pw[a * (trunc_ + 1) + e] = pw[a * (trunc_ + 1) + e - 1] * x[a];
    for (int o = trunc_; o >= 0; --o) {
        Eigen::MatrixXcd shell = Eigen::MatrixXcd::Zero(rows_, cols_);
        for (int i = idx_->order_begin(o); i < idx_->order_begin(o + 1); ++i) {
            double mono = 1.0;
            const auto& k = idx_->index(i);
            for (int a = 0; a < dim_x_; ++a) mono *= pw[a * (trunc_ + 1) + k[a]];
            const cplx* b = block(t, i);
            for (int r = 0; r < rows_; ++r)
                for (int c = 0; c < cols_; ++c) shell(r, c) += b[r * cols_ + c] * mono;
        }
        acc += shell;
    }
    return acc;
}

namespace {

void check_compatible(const PowerSeriesX& a, const PowerSeriesX& b) {
    require(a.dim_x() == b.dim_x(), ErrorCode::shape_mismatch, "series dimension mismatch");
    require(a.same_grid(b), ErrorCode::grid_mismatch, "series time grids differ");
}

}  // namespace

void ps_mul_slice(const IndexSet& idx, const cplx* a, int rows, int inner, const cplx* b, int cols,
                  cplx* out) {
    int as = rows * inner, bs = inner * cols, os = rows * cols;
    for (int r = 0; r < idx.size(); ++r) {
        cplx* o = out + static_cast<size_t>(r) * os;
        for (const auto& [p, q] : idx.pairs(r)) {
            const cplx* x = a + static_cast<size_t>(p) * as;
            const cplx* y = b + static_cast<size_t>(q) * bs;
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j) {
                    cplx acc = x[i * inner] * y[j];
                    for (int c = 1; c < inner; ++c) acc += x[i * inner + c] * y[c * cols + j];
                    o[i * cols + j] += acc;
                }
        }
    }
}

PowerSeriesX ps_mul(const PowerSeriesX& a, const PowerSeriesX& b) {
    check_compatible(a, b);
    bool a_scalar = a.rows() == 1 && a.cols() == 1;
    bool b_scalar = b.rows() == 1 && b.cols() == 1;
    int rows, cols, inner;
    if (a_scalar && !b_scalar) {
        rows = b.rows(); cols = b.cols(); inner = 0;
    } else if (b_scalar && !a_scalar) {
        rows = a.rows(); cols = a.cols(); inner = 0;
    } else {
        require(a.cols() == b.rows(), ErrorCode::shape_mismatch, "coefficient shapes incompatible for product");
        rows = a.rows(); cols = b.cols(); inner = a.cols();
    }
    int K = std::min(a.trunc_order(), b.trunc_order());
    PowerSeriesX out(a.dim_x(), K, rows, cols, a.time_grid());
    const IndexSet& io = out.indices();
    const IndexSet& ia = a.indices();
    const IndexSet& ib = b.indices();
    bool same_sets = (&ia == &io) && (&ib == &io);
    for (int t = 0; t < out.n_times(); ++t) {
        for (int r = 0; r < io.size(); ++r) {
            cplx* o = out.block(t, r);
            for (const auto& [p, q] : io.pairs(r)) {
                int pa = same_sets ? p : ia.find(io.index(p));
                int qb = same_sets ? q : ib.find(io.index(q));
                const cplx* x = a.block(t, pa);
                const cplx* y = b.block(t, qb);
                if (inner == 0) {
                    if (a_scalar && !b_scalar) {
                        for (int e = 0; e < rows * cols; ++e) o[e] += x[0] * y[e];
                    } else {
                        for (int e = 0; e < rows * cols; ++e) o[e] += x[e] * y[0];
                    }
                } else {
                    for (int i = 0; i < rows; ++i)
                        for (int j = 0; j < cols; ++j) {
                            cplx acc = x[i * inner] * y[j];
                            for (int c = 1; c < inner; ++c) acc += x[i * inner + c] * y[c * cols + j];
                            o[i * cols + j] += acc;
                        }
                }
            }
        }
    }
    return out;
}

PowerSeriesX ps_derive(const PowerSeriesX& a, int axis) {
    require(axis >= 0 && axis < a.dim_x(), ErrorCode::invalid_argument, "derivation axis out of range");
    int K = std::max(0, a.trunc_order() - 1);
    PowerSeriesX out(a.dim_x(), K, a.rows(), a.cols(), a.time_grid());
    const IndexSet& ia = a.indices();
    const IndexSet& io = out.indices();
    int bs = a.block_size();
    for (int t = 0; t < a.n_times(); ++t) {
        for (int i = 0; i < io.size(); ++i) {
            int src = ia.find(io.index(i));
            int up = ia.shift(src, axis);
            if (up < 0) continue;
            double f = io.index(i)[axis] + 1.0;
            const cplx* s = a.block(t, up);
            cplx* o = out.block(t, i);
            for (int e = 0; e < bs; ++e) o[e] = f * s[e];
        }
    }
    return out;
}

PowerSeriesX ps_add(const PowerSeriesX& a, const PowerSeriesX& b) {
    check_compatible(a, b);
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::shape_mismatch, "shape mismatch in sum");
    if (a.trunc_order() == b.trunc_order()) {
        PowerSeriesX out = a;
        for (size_t e = 0; e < out.data().size(); ++e) out.data()[e] += b.data()[e];
        return out;
    }
    int K = std::min(a.trunc_order(), b.trunc_order());
    PowerSeriesX x = ps_retruncate(a, K), y = ps_retruncate(b, K);
    for (size_t e = 0; e < x.data().size(); ++e) x.data()[e] += y.data()[e];
    return x;
}

PowerSeriesX ps_scale(const PowerSeriesX& a, cplx s) {
    PowerSeriesX out = a;
    for (auto& v : out.data()) v *= s;
    return out;
}

PowerSeriesX ps_retruncate(const PowerSeriesX& a, int trunc) {
    PowerSeriesX out(a.dim_x(), trunc, a.rows(), a.cols(), a.time_grid());
    const IndexSet& ia = a.indices();
    int n = std::min(ia.size(), out.n_index());
    int bs = a.block_size();
    // both index sets enumerate orders in the same graded order, so prefixes agree
    for (int t = 0; t < a.n_times(); ++t)
        for (int i = 0; i < n; ++i) std::copy(a.block(t, i), a.block(t, i) + bs, out.block(t, i));
    return out;
}

PowerSeriesX ps_constant(int dim_x, int trunc, const Eigen::MatrixXcd& m, std::vector<double> grid) {
    PowerSeriesX out(dim_x, trunc, static_cast<int>(m.rows()), static_cast<int>(m.cols()), std::move(grid));
    for (int t = 0; t < out.n_times(); ++t)
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) out.at(t, 0, r, c) = m(r, c);
    return out;
}

double phi_coefficient(const MultiIndex& k, double t, const ModelMajorant& m, double rel_tol, int* p_used) {
    require(m.R > 0.0, ErrorCode::invalid_argument, "R must be positive");
    require(m.rho >= 0.0 && t >= 0.0, ErrorCode::invalid_argument, "rho and t must be non-negative");
    int K = order_of(k);
    double log_kfact = 0.0;
    for (int v : k) log_kfact += std::lgamma(v + 1.0);
    double x = m.rho * t;
    double lead = std::pow(m.R, K);
    if (x == 0.0) {
        if (p_used) *p_used = 0;
        return lead * m.c0 / (static_cast<double>(K) * K + 1.0) * std::exp(std::lgamma(K + 1.0) - log_kfact);
    }
    if (x >= 1.0) fail(ErrorCode::domain, "rho*t >= 1: maximal regularity time exceeded");
    double lx = std::log(x);
    double sum = 0.0;
    int p = 0;
    for (; p <= m.p_trunc; ++p) {
        double n = K + p;
        double lterm = std::lgamma(n + 1.0) - log_kfact - std::lgamma(p + 1.0) + p * lx;
        double term = m.c0 / (n * n + 1.0) * std::exp(lterm);
        sum += term;
        double rbar = x * (n + 1.0) / (p + 1.0);
        if (rbar < 1.0 && term * rbar / (1.0 - rbar) < rel_tol * sum) break;
    }
    if (p > m.p_trunc) fail(ErrorCode::domain, "p-sum did not reach tolerance before p_trunc");
    if (p_used) *p_used = p;
    return lead * sum;
}

double phi_order_coefficient(int order, double t, double R, double rho, double c0, double rel_tol, int p_max,
                             int* p_used) {
    double lead = std::pow(R, order) * c0 / (static_cast<double>(order) * order + 1.0);
    double x = rho * t;
    if (x == 0.0) {
        if (p_used) *p_used = 0;
        return lead;
    }
    if (x >= 1.0) fail(ErrorCode::domain, "rho*t >= 1: maximal regularity time exceeded");
    // term_p = binom(o+p, p) x^p / ((o+p)^2+1), by recurrence
    double term = 1.0 / (static_cast<double>(order) * order + 1.0);
    double sum = term;
    int p = 0;
    for (;;) {
        double n = order + p;
        double rbar = x * (n + 1.0) / (p + 1.0);
        if (rbar < 1.0 && term * rbar / (1.0 - rbar) < rel_tol * sum) break;
        if (p >= p_max) fail(ErrorCode::domain, "p-sum did not reach tolerance before p_trunc");
        term *= rbar * (n * n + 1.0) / ((n + 1.0) * (n + 1.0) + 1.0);
        sum += term;
        ++p;
    }
    if (p_used) *p_used = p;
    return std::pow(R, order) * c0 * sum;
}

PhiTable::PhiTable(std::shared_ptr<const IndexSet> idx, const std::vector<double>& times, double R, double rho,
                   double c0, double rel_tol)
    : n_index_(idx->size()), n_times_(static_cast<int>(times.size())) {
    values_.resize(static_cast<size_t>(n_times_) * n_index_);
    std::vector<double> mult(n_index_);
    for (int i = 0; i < n_index_; ++i) mult[i] = std::exp(std::lgamma(idx->order(i) + 1.0) - idx->log_factorials(i));
    std::vector<double> by_order(idx->trunc() + 1);
    for (int t = 0; t < n_times_; ++t) {
        for (int o = 0; o <= idx->trunc(); ++o)
            by_order[o] = phi_order_coefficient(o, times[t], R, rho, c0, rel_tol);
        for (int i = 0; i < n_index_; ++i)
            values_[static_cast<size_t>(t) * n_index_ + i] = mult[i] * by_order[idx->order(i)];
    }
}

namespace {

void consider(MajorizeReport& rep, double ratio, const MultiIndex& k, double t, int ti, int r, int c) {
    if (ratio > rep.worst_ratio || rep.worst_time_index < 0) {
        rep.worst_ratio = ratio;
        rep.worst_k = k;
        rep.worst_t = t;
        rep.worst_time_index = ti;
        rep.worst_row = r;
        rep.worst_col = c;
    }
}

double safe_ratio(double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

MajorizeReport majorizes(const PowerSeriesX& phi, const ModelMajorant& m, const std::vector<double>& times) {
    MajorizeReport rep;
    if (times.empty()) return rep;
    double tmax = *std::max_element(times.begin(), times.end());
    if (m.rho * tmax >= 1.0) fail(ErrorCode::domain, "rho*max(times) >= 1");
    if (phi.has_grid())
        require(static_cast<int>(times.size()) == phi.n_times(), ErrorCode::grid_mismatch,
                "times must match the series grid");
    PhiTable table(phi.index_set(), times, m.R, m.rho, m.c0);
    const IndexSet& ix = phi.indices();
    for (int t = 0; t < static_cast<int>(times.size()); ++t) {
        int snap = phi.has_grid() ? t : 0;
        for (int i = 0; i < ix.size(); ++i) {
            double bound = m.C * table(t, i);
            for (int r = 0; r < phi.rows(); ++r)
                for (int c = 0; c < phi.cols(); ++c)
                    consider(rep, safe_ratio(std::abs(phi.at(snap, i, r, c)), bound), ix.index(i), times[t], t, r, c);
        }
    }
    rep.holds = rep.worst_ratio <= 1.0;
    return rep;
}

MajorizeReport dominates(const PowerSeriesX& phi, const PowerSeriesX& psi) {
    require(phi.dim_x() == psi.dim_x(), ErrorCode::shape_mismatch, "series dimension mismatch");
    require(psi.rows() == 1 && psi.cols() == 1, ErrorCode::shape_mismatch, "dominating series must be scalar");
    require(phi.n_times() == psi.n_times(), ErrorCode::grid_mismatch, "snapshot counts differ");
    MajorizeReport rep;
    int K = std::min(phi.trunc_order(), psi.trunc_order());
    const IndexSet& ix = phi.indices();
    const IndexSet& iy = psi.indices();
    for (int t = 0; t < phi.n_times(); ++t) {
        for (int i = 0; i < ix.order_begin(K + 1); ++i) {
            int j = iy.find(ix.index(i));
            double bound = psi.at(t, j).real();
            for (int r = 0; r < phi.rows(); ++r)
                for (int c = 0; c < phi.cols(); ++c)
                    consider(rep, safe_ratio(std::abs(phi.at(t, i, r, c)), bound), ix.index(i),
                             phi.has_grid() ? phi.time_grid()[t] : 0.0, t, r, c);
        }
    }
    rep.holds = rep.worst_ratio <= 1.0;
    return rep;
}

PowerSeriesX phi_series_1d(int trunc, double c0) {
    PowerSeriesX out(1, trunc);
    for (int k = 0; k <= trunc; ++k) out.at(0, k) = c0 / (static_cast<double>(k) * k + 1.0);
    return out;
}

double c0_bracket(int k) {
    require(k >= 0, ErrorCode::invalid_argument, "k must be non-negative");
    double kk = k;
    double half = 0.0;
    for (int p = 0; 2 * p < k; ++p) {
        double a = p, b = k - p;
        half += 1.0 / ((a * a + 1.0) * (b * b + 1.0));
    }
    double mid = 0.0;
    if (k % 2 == 0) {
        double a = k / 2;
        mid = 1.0 / ((a * a + 1.0) * (a * a + 1.0));
    }
    return (kk * kk + 1.0) * (2.0 * half + mid);
}

double c1_bracket_window(int n, int window) {
    double nn = n;
    double sum = 0.0;
    for (int p = -window; p <= window; ++p) {
        double a = p, b = n - p;
        sum += 1.0 / ((a * a + 1.0) * (b * b + 1.0));
    }
    return (nn * nn + 1.0) * sum;
}

double c1_bracket_tail_bound(int n, int window) {
    require(window >= 2 * std::abs(n) && window >= 1, ErrorCode::invalid_argument, "window must be >= 2|n|");
    // |p| > W >= 2|n| gives |n-p| >= |p|/2, so each term <= 4/p^4 and the
    // two-sided tail is at most 8/(3 W^3)
    double w = window;
    double nn = n;
    return (nn * nn + 1.0) * 8.0 / (3.0 * w * w * w);
}

int c1_default_window(int n) { return 2 * std::abs(n) + 1000; }

double c1_bracket_upper(int n) {
    int w = c1_default_window(n);
    return c1_bracket_window(n, w) + c1_bracket_tail_bound(n, w);
}

namespace {

template <class F>
SweepResult sweep_max(int n_max, int threads, F&& bracket) {
    std::vector<double> vals(n_max + 1);
    parallel_for(n_max + 1, threads, [&](int k) { vals[k] = bracket(k); });
    SweepResult res;
    for (int k = 0; k <= n_max; ++k) {
        if (vals[k] > res.bracket_max) {
            res.bracket_max = vals[k];
            res.argmax = k;
        }
    }
    res.value = kConstantSafety / res.bracket_max;
    return res;
}

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

}  // namespace

SweepResult derive_c0(int k_max, int threads) {
    require(k_max >= 1, ErrorCode::invalid_argument, "k_max must be >= 1");
    return sweep_max(k_max, threads, [](int k) { return c0_bracket(k); });
}

SweepResult derive_c1(int n_max, int threads) {
    require(n_max >= 1, ErrorCode::invalid_argument, "n_max must be >= 1");
    return sweep_max(n_max, threads, [](int n) { return c1_bracket_upper(n); });
}

UniversalConstants derive_constants(int k_max, int n_max, int threads) {
    UniversalConstants c;
    c.c0 = derive_c0(k_max, threads).value;
    c.c1 = derive_c1(n_max, threads).value;
    c.k_max = k_max;
    c.n_max = n_max;
    c.timestamp = utc_now();
    return c;
}

const UniversalConstants& canonical_constants() {
    static const UniversalConstants c{frozen::kC0, frozen::kC1, frozen::kKMax, frozen::kNMax, frozen::kTimestamp};
    return c;
}

std::string constants_to_json(const UniversalConstants& c) {
    nlohmann::ordered_json j;
    j["c0"] = c.c0;
    j["c1"] = c.c1;
    j["k_max"] = c.k_max;
    j["n_max"] = c.n_max;
    j["timestamp"] = c.timestamp;
    return j.dump(2) + "\n";
}

UniversalConstants constants_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::config, std::string("constants file is not valid JSON: ") + e.what());
    }
    for (const char* key : {"c0", "c1", "k_max", "n_max", "timestamp"})
        if (!j.contains(key)) fail(ErrorCode::config, std::string("constants file lacks field ") + key);
    UniversalConstants c;
    try {
        c.c0 = j.at("c0").get<double>();
        c.c1 = j.at("c1").get<double>();
        c.k_max = j.at("k_max").get<int>();
        c.n_max = j.at("n_max").get<int>();
        c.timestamp = j.at("timestamp").get<std::string>();
    } catch (const std::exception& e) {
        fail(ErrorCode::config, std::string("constants file has a field of the wrong type: ") + e.what());
    }
    if (!(c.c0 > 0.0 && c.c1 > 0.0)) fail(ErrorCode::config, "constants must be positive");
    return c;
}

void save_constants(const UniversalConstants& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    out << constants_to_json(c);
}

UniversalConstants load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return constants_from_json(ss.str());
}

AnalyticMajorantFit fit_analytic_majorant(const CoefficientOracle& oracle, const FitOrders& orders, double c0) {
    require(orders.total_order >= 1, ErrorCode::invalid_argument, "fit order must be >= 1");
    require(c0 > 0.0, ErrorCode::invalid_argument, "c0 must be positive");
    struct Sample {
        double mag;
        double log_w0;
        int kt, kx, ku;
        bool top;
    };
    std::vector<Sample> samples;
    int K = orders.total_order;
    auto xs = IndexSet::get(orders.dim_x, K);
    auto us = IndexSet::get(orders.dim_u, K);
    int t_max = orders.has_t ? K : 0;
    for (int kt = 0; kt <= t_max; ++kt) {
        for (int ix = 0; ix < xs->size(); ++ix) {
            int ox = xs->order(ix);
            if (kt + ox > K) continue;
            for (int iu = 0; iu < us->size(); ++iu) {
                int ou = us->order(iu);
                if (kt + ox + ou > K) continue;
                double h = oracle(kt, xs->index(ix), us->index(iu));
                if (!std::isfinite(h)) fail(ErrorCode::no_candidate, "coefficient oracle returned a non-finite value");
                int tx = kt + ox;
                double log_binom = std::lgamma(tx + 1.0) - std::lgamma(kt + 1.0) - xs->log_factorials(ix);
                double log_w0 = std::log(c0 / (static_cast<double>(tx) * tx + 1.0)) + log_binom;
                samples.push_back({std::abs(h), log_w0, kt, ox, ou, kt + ox + ou == K});
            }
        }
    }
    auto ladder = [&](bool used) {
        std::vector<double> v;
        int top = used ? orders.ladder_max : 0;
        for (int e = 0; e <= top; ++e) v.push_back(std::ldexp(1.0, e));
        return v;
    };
    auto la = ladder(orders.dim_u > 0);
    auto lr = ladder(orders.dim_x > 0);
    auto lp = ladder(orders.has_t);
    bool found = false;
    AnalyticMajorantFit best;
    for (double a : la)
        for (double R : lr)
            for (double rho : lp) {
                double top = 0.0, inner = 0.0;
                double la_ = std::log(a), lR = std::log(R), lrho = std::log(rho);
                for (const auto& s : samples) {
                    if (s.mag == 0.0) continue;
                    double r = std::exp(std::log(s.mag) - s.log_w0 - s.kt * lrho - s.kx * lR - s.ku * la_);
                    if (s.top) top = std::max(top, r);
                    else inner = std::max(inner, r);
                }
                if (top > inner * (1.0 + 1e-12)) continue;
                double C = std::max(top, inner);
                if (!found || C < best.C_H * (1.0 - 1e-12)) {
                    found = true;
                    best = {C, R, rho, a, top, inner};
                }
            }
    if (!found) fail(ErrorCode::no_candidate, "no ladder candidate bounds the coefficients with a margin");
    return best;
}

}  // namespace gvi
