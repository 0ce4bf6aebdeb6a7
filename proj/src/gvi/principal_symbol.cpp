#include "gvi/principal_symbol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace gvi {

using nlohmann::json;

int PolyTerm::u_degree() const { return order_of(u_exp); }

void MatrixPoly::add_term(PolyTerm term) {
    require(static_cast<int>(term.x_exp.size()) == d_, ErrorCode::shape_mismatch, "term x-exponent length");
    require(static_cast<int>(term.u_exp.size()) == n_, ErrorCode::shape_mismatch, "term u-exponent length");
    require(term.coeff.rows() == n_ && term.coeff.cols() == n_, ErrorCode::shape_mismatch, "term coefficient shape");
    require(term.t_exp >= 0, ErrorCode::invalid_argument, "negative exponent");
    for (int e : term.x_exp) require(e >= 0, ErrorCode::invalid_argument, "negative exponent");
    for (int e : term.u_exp) require(e >= 0, ErrorCode::invalid_argument, "negative exponent");
    terms_.push_back(std::move(term));
}

Eigen::MatrixXcd MatrixPoly::eval(double t, const std::vector<double>& x, const Eigen::VectorXcd& u) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_, n_);
    for (const auto& term : terms_) {
        cplx s = std::pow(t, term.t_exp);
        for (int a = 0; a < d_; ++a) s *= std::pow(x[a], term.x_exp[a]);
        for (int i = 0; i < n_; ++i)
            if (term.u_exp[i] > 0) s *= std::pow(u(i), term.u_exp[i]);
        out += s * term.coeff;
    }
    return out;
}

Eigen::MatrixXcd MatrixPoly::eval_tx(double t, const std::vector<double>& x) const {
    return eval(t, x, Eigen::VectorXcd::Zero(n_));
}

MatrixPoly MatrixPoly::derivative(int v) const {
    require(v >= 0 && v <= d_, ErrorCode::invalid_argument, "derivative variable out of range");
    MatrixPoly out(d_, n_);
    for (const auto& term : terms_) {
        if ((v == 0 ? term.t_exp : term.x_exp[v - 1]) == 0) continue;
        PolyTerm nt = term;
        int& ne = v == 0 ? nt.t_exp : nt.x_exp[v - 1];
        nt.coeff *= static_cast<double>(ne);
        ne -= 1;
        out.terms_.push_back(std::move(nt));
    }
    return out;
}

PowerSeriesX MatrixPoly::x_series(double t, int trunc) const {
    PowerSeriesX out(d_, trunc, n_, n_);
    for (const auto& term : terms_) {
        if (term.u_degree() != 0) continue;
        int i = out.indices().find(term.x_exp);
        if (i < 0) continue;
        double s = std::pow(t, term.t_exp);
        cplx* b = out.block(0, i);
        for (int r = 0; r < n_; ++r)
            for (int c = 0; c < n_; ++c) b[r * n_ + c] += s * term.coeff(r, c);
    }
    return out;
}

bool MatrixPoly::has_u_degree_zero() const {
    for (const auto& term : terms_)
        if (term.u_degree() == 0 && term.coeff.cwiseAbs().maxCoeff() > 0.0) return true;
    return false;
}

MatrixPoly MatrixPoly::scaled(double s) const {
    MatrixPoly out = *this;
    for (auto& term : out.terms_) term.coeff *= s;
    return out;
}

MatrixPoly MatrixPoly::plus(const MatrixPoly& o) const {
    require(d_ == o.d_ && n_ == o.n_, ErrorCode::shape_mismatch, "polynomial shapes differ");
    MatrixPoly out = *this;
    for (const auto& term : o.terms_) out.terms_.push_back(term);
    return out;
}

MatrixPoly SymbolFamily::principal() const {
    MatrixPoly out(d, N);
    for (int j = 0; j < d; ++j)
        if (xi0[j] != 0.0) out = out.plus(A[j].scaled(xi0[j]));
    return out;
}

PowerSeriesX SymbolFamily::abar_series(double t, int trunc) const { return principal().x_series(t, trunc); }

Eigen::MatrixXcd SymbolFamily::abar(double t, const std::vector<double>& x) const { return principal().eval_tx(t, x); }

namespace {

Eigen::MatrixXcd rotation() {
    Eigen::MatrixXcd J(2, 2);
    J << 0.0, -1.0, 1.0, 0.0;
    return J;
}

PolyTerm term(int t, std::vector<int> x, std::vector<int> u, Eigen::MatrixXcd c) {
    return PolyTerm{t, std::move(x), std::move(u), std::move(c)};
}

MatrixPoly u1_identity(int n) {
    MatrixPoly F(1, n);
    std::vector<int> u(n, 0);
    u[0] = 1;
    F.add_term(term(0, {0}, u, Eigen::MatrixXcd::Identity(n, n)));
    return F;
}

void validate_family(const SymbolFamily& f) {
    require(f.d >= 1 && f.N >= 1, ErrorCode::config, "symbol needs d >= 1 and N >= 1");
    require(static_cast<int>(f.A.size()) == f.d, ErrorCode::config, "symbol needs one A_j per dimension");
    require(static_cast<int>(f.xi0.size()) == f.d, ErrorCode::config, "xi0 length must equal d");
    double nrm = 0.0;
    for (double v : f.xi0) nrm += v * v;
    require(std::abs(std::sqrt(nrm) - 1.0) < 1e-12, ErrorCode::config, "xi0 must be a unit vector");
    for (const auto& a : f.A)
        require(a.dim_x() == f.d && a.size() == f.N, ErrorCode::config, "A_j shape mismatch");
    require(f.F.dim_x() == f.d && f.F.size() == f.N, ErrorCode::config, "F shape mismatch");
}

}  // namespace

std::vector<std::string> builtin_model_names() { return {"cauchy-riemann", "jordan-elliptic", "max-flat"}; }

SymbolFamily builtin_model(const std::string& name) {
    SymbolFamily f;
    f.name = name;
    f.d = 1;
    f.xi0 = {1.0};
    if (name == "cauchy-riemann") {
        f.N = 2;
        MatrixPoly A(1, 2);
        A.add_term(term(0, {0}, {0, 0}, rotation()));
        f.A = {A};
        f.F = u1_identity(2);
    } else if (name == "jordan-elliptic") {
        // realification of [[i, 1], [0, i]]
        f.N = 4;
        Eigen::MatrixXcd nil = Eigen::MatrixXcd::Zero(2, 2);
        nil(0, 1) = 1.0;
        Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
        Eigen::MatrixXcd M(4, 4);
        M << nil, -I2, I2, nil;
        MatrixPoly A(1, 4);
        A.add_term(term(0, {0}, {0, 0, 0, 0}, M));
        f.A = {A};
        f.F = u1_identity(4);
    } else if (name == "max-flat") {
        // (1 - t^2 - x^2) J
        f.N = 2;
        MatrixPoly A(1, 2);
        A.add_term(term(0, {0}, {0, 0}, rotation()));
        A.add_term(term(2, {0}, {0, 0}, -rotation()));
        A.add_term(term(0, {2}, {0, 0}, -rotation()));
        f.A = {A};
        f.F = u1_identity(2);
    } else {
        fail(ErrorCode::config, "unknown built-in model " + name);
    }
    return f;
}

namespace {

Eigen::MatrixXcd matrix_from_json(const json& re, const json* im, int n) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    require(re.is_array() && static_cast<int>(re.size()) == n, ErrorCode::config, "coefficient must be N x N");
    for (int r = 0; r < n; ++r) {
        require(re[r].is_array() && static_cast<int>(re[r].size()) == n, ErrorCode::config,
                "coefficient must be N x N");
        for (int c = 0; c < n; ++c) m(r, c) = re[r][c].get<double>();
    }
    if (im) {
        require(im->is_array() && static_cast<int>(im->size()) == n, ErrorCode::config, "coefficient must be N x N");
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) += cplx(0.0, (*im)[r][c].get<double>());
    }
    return m;
}

MatrixPoly poly_from_json(const json& arr, int d, int n) {
    MatrixPoly p(d, n);
    require(arr.is_array(), ErrorCode::config, "polynomial must be a list of terms");
    for (const auto& t : arr) {
        PolyTerm term;
        term.t_exp = t.value("t", 0);
        term.x_exp = t.value("x", std::vector<int>(d, 0));
        term.u_exp = t.value("u", std::vector<int>(n, 0));
        require(t.contains("re"), ErrorCode::config, "term lacks field re");
        term.coeff = matrix_from_json(t.at("re"), t.contains("im") ? &t.at("im") : nullptr, n);
        p.add_term(std::move(term));
    }
    return p;
}

json poly_to_json(const MatrixPoly& p) {
    json arr = json::array();
    for (const auto& term : p.terms()) {
        json t;
        t["t"] = term.t_exp;
        t["x"] = term.x_exp;
        t["u"] = term.u_exp;
        json re = json::array(), im = json::array();
        for (int r = 0; r < term.coeff.rows(); ++r) {
            std::vector<double> rr, ii;
            for (int c = 0; c < term.coeff.cols(); ++c) {
                rr.push_back(term.coeff(r, c).real());
                ii.push_back(term.coeff(r, c).imag());
            }
            re.push_back(rr);
            im.push_back(ii);
        }
        t["re"] = re;
        t["im"] = im;
        arr.push_back(t);
    }
    return arr;
}

}  // namespace

SymbolFamily symbol_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::config, std::string("symbol file is not valid JSON: ") + e.what());
    }
    SymbolFamily f;
    try {
        f.name = j.value("name", std::string("file"));
        f.d = j.at("d").get<int>();
        f.N = j.at("N").get<int>();
        require(f.d >= 1 && f.N >= 1, ErrorCode::config, "symbol needs d >= 1 and N >= 1");
        f.xi0 = j.value("xi0", std::vector<double>{});
        if (f.xi0.empty()) {
            f.xi0.assign(f.d, 0.0);
            f.xi0[0] = 1.0;
        }
        const auto& A = j.at("A");
        require(A.is_array(), ErrorCode::config, "A must be a list with one polynomial per dimension");
        for (const auto& a : A) f.A.push_back(poly_from_json(a, f.d, f.N));
        f.F = j.contains("F") ? poly_from_json(j.at("F"), f.d, f.N) : MatrixPoly(f.d, f.N);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::config, std::string("malformed symbol file: ") + e.what());
    }
    validate_family(f);
    return f;
}

SymbolFamily load_symbol(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return symbol_from_json(ss.str());
}

std::string symbol_to_json(const SymbolFamily& f) {
    json j;
    j["name"] = f.name;
    j["d"] = f.d;
    j["N"] = f.N;
    j["xi0"] = f.xi0;
    json A = json::array();
    for (const auto& a : f.A) A.push_back(poly_to_json(a));
    j["A"] = A;
    j["F"] = poly_to_json(f.F);
    return j.dump(2);
}

const char* mu_status_name(MuStatus s) {
    switch (s) {
    case MuStatus::OK: return "OK";
    case MuStatus::CONDITION_I_VIOLATED: return "CONDITION_I_VIOLATED";
    case MuStatus::SIGN_FAIL: return "SIGN_FAIL";
    case MuStatus::AMBIGUOUS: return "AMBIGUOUS";
    case MuStatus::NOT_APPLICABLE: return "NOT_APPLICABLE";
    }
    return "UNKNOWN";
}

namespace {

Eigen::VectorXcd eigenvalues_of(const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success) fail(ErrorCode::no_convergence, "eigenvalue solver failed");
    return es.eigenvalues();
}

void normalize_phase(Eigen::VectorXcd& v) {
    v.normalize();
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            return;
        }
    }
}

// m eigenvalues nearest to `center`; ambiguity when the m-th nearest is not
// well separated from the next one.
struct ClusterPick {
    cplx mean;
    double spread = 0.0;
    double gap = 0.0;
    bool ambiguous = false;
};

ClusterPick pick_cluster(const Eigen::VectorXcd& ev, cplx center, int m) {
    std::vector<int> order(ev.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(ev(a) - center) < std::abs(ev(b) - center); });
    ClusterPick p;
    cplx sum = 0.0;
    for (int i = 0; i < m; ++i) sum += ev(order[i]);
    p.mean = sum / static_cast<double>(m);
    double far_in = std::abs(ev(order[m - 1]) - center);
    p.spread = far_in;
    if (m < ev.size()) {
        double near_out = std::abs(ev(order[m]) - center);
        p.ambiguous = far_in > 0.5 * near_out;
        p.gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i)
            for (int k = m; k < ev.size(); ++k) p.gap = std::min(p.gap, std::abs(ev(order[i]) - ev(order[k])));
    } else {
        p.gap = std::numeric_limits<double>::infinity();
    }
    return p;
}

}  // namespace

SymbolSpectrum check_ellipticity(const SymbolFamily& fam, const SymbolTolerances& tol) {
    std::vector<double> x0(fam.d, 0.0);
    Eigen::MatrixXcd A0 = fam.abar(0.0, x0);
    SymbolSpectrum s;
    s.eigenvalues = eigenvalues_of(A0);
    int N = fam.N;
    int best = -1;
    for (int i = 0; i < N; ++i) {
        if (best < 0) {
            best = i;
            continue;
        }
        double di = s.eigenvalues(i).imag() - s.eigenvalues(best).imag();
        if (di > tol.cluster_radius ||
            (std::abs(di) <= tol.cluster_radius && s.eigenvalues(i).real() > s.eigenvalues(best).real() + tol.cluster_radius))
            best = i;
    }
    if (!(s.eigenvalues(best).imag() > tol.imag_tol))
        fail(ErrorCode::not_elliptic, "the frozen symbol has real spectrum");
    cplx center = s.eigenvalues(best);
    cplx sum = 0.0;
    int m = 0;
    bool tie = false;
    for (int i = 0; i < N; ++i) {
        if (std::abs(s.eigenvalues(i) - center) <= tol.cluster_radius) {
            sum += s.eigenvalues(i);
            ++m;
        } else if (s.eigenvalues(i).imag() >= center.imag() - tol.cluster_radius) {
            tie = true;
        }
    }
    s.lambda0 = sum / static_cast<double>(m);
    s.gamma0 = s.lambda0.imag();
    s.m = m;
    s.strictly_maximal = !tie;

    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
    Eigen::MatrixXcd shifted = A0 - s.lambda0 * I;
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullV);
        Eigen::VectorXcd e = svd.matrixV().col(N - 1);
        normalize_phase(e);
        s.e_plus = e;
    }
    Eigen::MatrixXcd power = I;
    for (int k = 0; k < m; ++k) power = power * shifted;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(power, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXcd T(N, N);
    T.leftCols(m) = svd.matrixV().rightCols(m);
    if (N > m) T.rightCols(N - m) = svd.matrixU().leftCols(N - m);
    Eigen::MatrixXcd Tinv = T.fullPivLu().inverse();
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(N, N);
    D.topLeftCorner(m, m) = Eigen::MatrixXcd::Identity(m, m);
    s.P0 = T * D * Tinv;
    Eigen::MatrixXcd B = Tinv * A0 * T;
    Eigen::MatrixXcd Binv = Eigen::MatrixXcd::Zero(N, N);
    if (N > m) Binv.bottomRightCorner(N - m, N - m) = B.bottomRightCorner(N - m, N - m).inverse();
    s.A0_partial_inverse = T * Binv * Tinv;

    Eigen::JacobiSVD<Eigen::MatrixXcd> rsvd(shifted);
    const auto& sv = rsvd.singularValues();
    double scale = std::max(1.0, sv(0));
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol.rank_tol * scale) ++rank;
    s.semisimple = (N - rank == m);
    s.rate_case = RateCase::GENERAL;
    return s;
}

cplx lambda_branch(const SymbolFamily& fam, const SymbolSpectrum& spec, double t, const std::vector<double>& x,
                   const SymbolTolerances& tol) {
    double len = t * t;
    for (double v : x) len += v * v;
    len = std::sqrt(len);
    int steps = std::max(tol.continuation_steps, static_cast<int>(std::ceil(len / 0.01)));
    cplx cur = spec.lambda0;
    std::vector<double> xs(fam.d);
    for (int k = 1; k <= steps; ++k) {
        double f = static_cast<double>(k) / steps;
        for (int a = 0; a < fam.d; ++a) xs[a] = f * x[a];
        ClusterPick p = pick_cluster(eigenvalues_of(fam.abar(f * t, xs)), cur, spec.m);
        if (p.ambiguous) fail(ErrorCode::continuation_lost, "eigenvalue branch ambiguous during continuation");
        cur = p.mean;
    }
    return cur;
}

NoncoalescenceReport check_semisimple_noncoalescing(const SymbolFamily& fam, SymbolSpectrum& spec,
                                                    const SymbolTolerances& tol) {
    NoncoalescenceReport rep;
    rep.semisimple = spec.semisimple;
    int D = fam.d + 1;
    std::vector<std::vector<double>> dirs;
    for (int a = 0; a < D; ++a)
        for (int sgn : {1, -1}) {
            std::vector<double> v(D, 0.0);
            v[a] = sgn;
            dirs.push_back(v);
        }
    for (int mask = 0; mask < (1 << D); ++mask) {
        std::vector<double> v(D);
        for (int a = 0; a < D; ++a) v[a] = ((mask >> a) & 1 ? -1.0 : 1.0) / std::sqrt(static_cast<double>(D));
        dirs.push_back(v);
    }
    double min_gap = std::numeric_limits<double>::infinity();
    {
        ClusterPick p0 = pick_cluster(spec.eigenvalues, spec.lambda0, spec.m);
        min_gap = p0.gap;
    }
    std::vector<double> xs(fam.d);
    for (const auto& dir : dirs) {
        cplx cur = spec.lambda0;
        for (int k = 1; k <= tol.continuation_steps; ++k) {
            double r = tol.continuation_radius * k / tol.continuation_steps;
            for (int a = 0; a < fam.d; ++a) xs[a] = r * dir[a + 1];
            ClusterPick p = pick_cluster(eigenvalues_of(fam.abar(r * dir[0], xs)), cur, spec.m);
            if (p.ambiguous) {
                rep.continuation_lost = true;
                rep.note = "branch lost along a continuation ray";
                break;
            }
            min_gap = std::min(min_gap, p.gap);
            cur = p.mean;
        }
        if (rep.continuation_lost) break;
    }
    rep.min_gap = min_gap;
    rep.noncoalescing = !rep.continuation_lost && min_gap > tol.gap_tol;
    spec.noncoalescing = rep.noncoalescing;
    spec.min_gap = min_gap;
    spec.continuation_note = rep.note;
    return rep;
}

MuStatus compute_mu_and_check_sign(const SymbolFamily& fam, SymbolSpectrum& spec, const SymbolTolerances& tol) {
    int D = fam.d + 1;
    std::vector<double> x0(fam.d, 0.0);
    MatrixPoly P = fam.principal();
    std::vector<MatrixPoly> d1;
    std::vector<Eigen::MatrixXcd> g(D);
    for (int i = 0; i < D; ++i) {
        d1.push_back(P.derivative(i));
        g[i] = d1[i].eval_tx(0.0, x0);
    }
    const Eigen::MatrixXcd& P0 = spec.P0;
    const Eigen::MatrixXcd& Ainv = spec.A0_partial_inverse;
    spec.mu = Eigen::MatrixXcd::Zero(D, D);
    for (int j = 0; j < D; ++j) {
        if ((P0 * g[j] * P0).cwiseAbs().maxCoeff() > tol.def_tol) {
            spec.mu_status = MuStatus::CONDITION_I_VIOLATED;
            return spec.mu_status;
        }
    }
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) {
            Eigen::MatrixXcd h = d1[i].derivative(j).eval_tx(0.0, x0);
            Eigen::MatrixXcd M = P0 * g[i] * Ainv * g[j] * P0 + P0 * g[j] * Ainv * g[i] * P0 + P0 * h * P0;
            Eigen::VectorXcd ev = eigenvalues_of(M);
            double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
            std::vector<cplx> distinct;
            for (int k = 0; k < ev.size(); ++k) {
                if (std::abs(ev(k)) <= tol.def_tol * scale) continue;
                bool seen = false;
                for (const auto& v : distinct)
                    if (std::abs(v - ev(k)) <= tol.cluster_radius * std::max(1.0, std::abs(v))) seen = true;
                if (!seen) distinct.push_back(ev(k));
            }
            if (distinct.size() > 1) {
                spec.mu_status = MuStatus::AMBIGUOUS;
                return spec.mu_status;
            }
            spec.mu(i, j) = distinct.empty() ? cplx(0.0, 0.0) : distinct[0];
        }
    Eigen::MatrixXd im = spec.mu.imag();
    Eigen::MatrixXd sym = 0.5 * (im + im.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    spec.mu_status = es.eigenvalues().maxCoeff() < -tol.def_tol ? MuStatus::OK : MuStatus::SIGN_FAIL;
    return spec.mu_status;
}

bool check_quadratic_source(const SymbolFamily& fam) { return !fam.F.has_u_degree_zero(); }

double gevrey_ceiling(RateCase c, int m) {
    switch (c) {
    case RateCase::GENERAL: return 1.0 / (m + 1.0);
    case RateCase::SEMISIMPLE: return 0.5;
    case RateCase::MAXIMAL: return 2.0 / 3.0;
    }
    return 0.0;
}

AssumptionReport analyze_symbol(const SymbolFamily& fam, const SymbolTolerances& tol) {
    AssumptionReport rep;
    rep.spectrum = check_ellipticity(fam, tol);
    SymbolSpectrum& s = rep.spectrum;
    rep.noncoalescence = check_semisimple_noncoalescing(fam, s, tol);
    rep.quadratic_source = check_quadratic_source(fam);
    if (s.strictly_maximal && s.semisimple && s.noncoalescing) {
        compute_mu_and_check_sign(fam, s, tol);
        s.rate_case = s.mu_status == MuStatus::OK ? RateCase::MAXIMAL : RateCase::SEMISIMPLE;
    } else {
        s.mu_status = MuStatus::NOT_APPLICABLE;
        s.rate_case = RateCase::GENERAL;
    }
    rep.gevrey_ceiling = gevrey_ceiling(s.rate_case, s.m);
    return rep;
}

namespace {

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vec_json(const Eigen::VectorXcd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(cplx_json(v(i)));
    return a;
}

}  // namespace

std::string assumption_report_json(const AssumptionReport& rep) {
    const SymbolSpectrum& s = rep.spectrum;
    nlohmann::ordered_json j;
    j["lambda0"] = cplx_json(s.lambda0);
    j["gamma0"] = s.gamma0;
    j["m"] = s.m;
    j["e_plus"] = vec_json(s.e_plus);
    j["eigenvalues"] = vec_json(s.eigenvalues);
    j["strictly_maximal"] = s.strictly_maximal;
    j["semisimple"] = s.semisimple;
    j["noncoalescing"] = s.noncoalescing;
    j["min_gap"] = std::isfinite(s.min_gap) ? json(s.min_gap) : json(nullptr);
    if (!s.continuation_note.empty()) j["continuation_note"] = s.continuation_note;
    j["mu_status"] = mu_status_name(s.mu_status);
    if (s.mu.size() > 0 && s.mu_status != MuStatus::NOT_APPLICABLE) {
        json mu = json::array();
        for (int r = 0; r < s.mu.rows(); ++r) mu.push_back(vec_json(s.mu.row(r).transpose()));
        j["mu"] = mu;
    }
    j["quadratic_source"] = rep.quadratic_source;
    j["case"] = rate_case_name(s.rate_case);
    j["gevrey_ceiling"] = rep.gevrey_ceiling;
    return j.dump(2);
}

RateFunction::RateFunction(RateCase c, double gamma0, double eps, double R_inv, double r, double omega)
    : case_(c), gamma0_(gamma0), eps_(eps), R_inv_(R_inv), r_(r), omega_(omega) {
    if (c == RateCase::SEMISIMPLE) omega_ = 0.0;
    if (c == RateCase::MAXIMAL) omega_ = 1.0;
}

void RateFunction::attach_branch(const SymbolFamily& fam, const SymbolSpectrum& spec, double s_max, int samples,
                                 const SymbolTolerances& tol) {
    require(samples >= 2 && s_max >= 0.0, ErrorCode::invalid_argument, "branch table needs samples and a range");
    tab_tau_.resize(samples + 1);
    tab_im_.resize(samples + 1);
    tab_int_.assign(samples + 1, 0.0);
    std::vector<double> x0(fam.d, 0.0);
    cplx cur = spec.lambda0;
    double dt_max = tol.continuation_radius / tol.continuation_steps;
    double prev_t = 0.0;
    for (int k = 0; k <= samples; ++k) {
        double tau = s_max * k / samples;
        double t = eps_ * tau;
        int sub = std::max(1, static_cast<int>(std::ceil((t - prev_t) / dt_max)));
        for (int q = 1; q <= sub && k > 0; ++q) {
            double tt = prev_t + (t - prev_t) * q / sub;
            ClusterPick p = pick_cluster(eigenvalues_of(fam.abar(tt, x0)), cur, spec.m);
            if (p.ambiguous) fail(ErrorCode::continuation_lost, "eigenvalue branch ambiguous along the time axis");
            cur = p.mean;
        }
        prev_t = t;
        tab_tau_[k] = tau;
        tab_im_[k] = cur.imag();
        if (k > 0) tab_int_[k] = tab_int_[k - 1] + 0.5 * (tau - tab_tau_[k - 1]) * (tab_im_[k] + tab_im_[k - 1]);
    }
}

double RateFunction::branch_im(double tau) const {
    require(!tab_tau_.empty(), ErrorCode::invalid_argument, "MAXIMAL lower rate needs an attached branch");
    if (tau <= tab_tau_.front()) return tab_im_.front();
    if (tau >= tab_tau_.back()) {
        require(tau <= tab_tau_.back() * (1.0 + 1e-12), ErrorCode::domain, "rate requested past the branch table");
        return tab_im_.back();
    }
    auto it = std::upper_bound(tab_tau_.begin(), tab_tau_.end(), tau);
    size_t k = static_cast<size_t>(it - tab_tau_.begin());
    double w = (tau - tab_tau_[k - 1]) / (tab_tau_[k] - tab_tau_[k - 1]);
    return (1.0 - w) * tab_im_[k - 1] + w * tab_im_[k];
}

double RateFunction::sharp(double tau) const {
    switch (case_) {
    case RateCase::GENERAL: return gamma0_ + eps_ * tau + R_inv_ + omega_;
    case RateCase::SEMISIMPLE: return gamma0_ + eps_ * tau + R_inv_;
    case RateCase::MAXIMAL: return gamma0_;
    }
    return 0.0;
}

double RateFunction::flat(double tau) const {
    switch (case_) {
    case RateCase::GENERAL: return gamma0_ - eps_ * tau - r_ - omega_;
    case RateCase::SEMISIMPLE: return gamma0_ - eps_ * tau - r_;
    case RateCase::MAXIMAL: return branch_im(tau) - r_;
    }
    return 0.0;
}

double RateFunction::int_sharp(double s) const {
    switch (case_) {
    case RateCase::GENERAL: return (gamma0_ + R_inv_ + omega_) * s + 0.5 * eps_ * s * s;
    case RateCase::SEMISIMPLE: return (gamma0_ + R_inv_) * s + 0.5 * eps_ * s * s;
    case RateCase::MAXIMAL: return gamma0_ * s;
    }
    return 0.0;
}

double RateFunction::int_flat(double s) const {
    switch (case_) {
    case RateCase::GENERAL: return (gamma0_ - r_ - omega_) * s - 0.5 * eps_ * s * s;
    case RateCase::SEMISIMPLE: return (gamma0_ - r_) * s - 0.5 * eps_ * s * s;
    case RateCase::MAXIMAL: {
        require(!tab_tau_.empty(), ErrorCode::invalid_argument, "MAXIMAL lower rate needs an attached branch");
        if (s <= 0.0) return 0.0;
        auto it = std::upper_bound(tab_tau_.begin(), tab_tau_.end(), s);
        size_t k = std::min(static_cast<size_t>(it - tab_tau_.begin()), tab_tau_.size() - 1);
        double base = tab_int_[k - 1];
        double a = tab_tau_[k - 1];
        double v = base + 0.5 * (s - a) * (tab_im_[k - 1] + branch_im(s));
        return v - r_ * s;
    }
    }
    return 0.0;
}

RateFunction make_rates(const SymbolSpectrum& spec, double R_inv, double r, double omega, double eps) {
    return RateFunction(spec.rate_case, spec.gamma0, eps, R_inv, r, omega);
}

}  // namespace gvi
