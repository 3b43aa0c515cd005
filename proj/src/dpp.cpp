#include "gml/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gml/linalg.hpp"
#include "gml/parallel.hpp"
#include "gml/special_functions.hpp"

namespace gml {

namespace {

constexpr double kDiagSwitch = 1e-7;
constexpr double kSampleCutoff = 1e-12;

double sine_value(double d) {
    const double t = std::numbers::pi * d;
    if (std::fabs(d) < 1e-8) return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

// phi_{N-1}, phi_N, phi_{N+1} at a set of points (raw Hermite variable).
struct CdFeatures {
    std::vector<OscillatorTriple> t;
    std::vector<double> x;
};

CdFeatures cd_features(int N, const std::vector<double>& xs, double scale) {
    CdFeatures f;
    f.x.resize(xs.size());
    f.t.resize(xs.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < xs.size(); ++i) {
        f.x[i] = scale * xs[i];
        f.t[i] = oscillator_triple(N, f.x[i]);
    }
    return f;
}

inline double cd_diag(int N, const OscillatorTriple& t) {
    return N * t.cur * t.cur - std::sqrt(static_cast<double>(N) * (N + 1.0)) * t.prev * t.next;
}

inline double cd_pair(int N, double x, const OscillatorTriple& tx, double y, const OscillatorTriple& ty) {
    const double d = x - y;
    if (std::fabs(d) > kDiagSwitch)
        return std::sqrt(0.5 * N) * (tx.cur * ty.prev - tx.prev * ty.cur) / d;
    return cd_diag(N, oscillator_triple(N, 0.5 * (x + y)));
}

double raw_scale(const KernelSpec& k) { return k.kind() == KernelKind::normalized_gue ? std::sqrt(2.0 * k.N()) : 1.0; }

// sum_i sum_j wx_i wy_j K(x_i, y_j)^2 without forming the matrix; partial sums
// per row are combined in row order so the result is worker-count independent.
double weighted_square_sum(const KernelSpec& k, const QuadratureRule& X, const QuadratureRule& Y) {
    const std::size_t nx = X.size(), ny = Y.size();
    std::vector<double> rows(nx, 0.0);
    if (k.kind() == KernelKind::christoffel_darboux || k.kind() == KernelKind::normalized_gue) {
        const double s = raw_scale(k);
        const int N = k.N();
        const CdFeatures fx = cd_features(N, X.x, s), fy = cd_features(N, Y.x, s);
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t i = 0; i < nx; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < ny; ++j) {
                const double v = cd_pair(N, fx.x[i], fx.t[i], fy.x[j], fy.t[j]);
                acc += Y.w[j] * v * v;
            }
            // K^(N) = s K_N(s., s.), so the square carries s^2
            rows[i] = X.w[i] * acc * s * s;
        }
    } else {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t i = 0; i < nx; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < ny; ++j) {
                const double v = k(X.x[i], Y.x[j]);
                acc += Y.w[j] * v * v;
            }
            rows[i] = X.w[i] * acc;
        }
    }
    return compensated_sum(rows);
}

QuadratureRule uniform_panels(double a, double b, double max_len, int per_panel = 16) {
    return composite_gauss_legendre({a, b}, per_panel, max_len);
}

}  // namespace

double eval_sine_kernel(double x, double y) { return sine_value(x - y); }

double eval_cd_kernel(int N, double x, double y) {
    if (N < 1) throw std::invalid_argument("eval_cd_kernel: N < 1");
    return cd_pair(N, x, oscillator_triple(N, x), y, oscillator_triple(N, y));
}

KernelSpec KernelSpec::christoffel_darboux(int N) {
    if (N < 1) throw std::invalid_argument("christoffel_darboux: N < 1");
    KernelSpec k;
    k.kind_ = KernelKind::christoffel_darboux;
    k.N_ = N;
    k.name_ = "christoffel_darboux";
    return k;
}

KernelSpec KernelSpec::normalized_gue(int N) {
    KernelSpec k = christoffel_darboux(N);
    k.kind_ = KernelKind::normalized_gue;
    k.name_ = "normalized_gue";
    return k;
}

KernelSpec KernelSpec::sine() {
    KernelSpec k;
    k.kind_ = KernelKind::sine;
    k.name_ = "sine";
    return k;
}

KernelSpec KernelSpec::custom(std::function<double(double, double)> f, std::string name) {
    KernelSpec k;
    k.kind_ = KernelKind::custom;
    k.name_ = std::move(name);
    k.custom_ = std::move(f);
    return k;
}

double KernelSpec::operator()(double x, double y) const {
    switch (kind_) {
        case KernelKind::sine:
            return sine_value(x - y);
        case KernelKind::christoffel_darboux:
            return eval_cd_kernel(N_, x, y);
        case KernelKind::normalized_gue: {
            const double s = std::sqrt(2.0 * N_);
            return s * eval_cd_kernel(N_, s * x, s * y);
        }
        case KernelKind::custom:
            return custom_(x, y);
    }
    return 0.0;
}

void KernelSpec::fill(const std::vector<double>& xs, const std::vector<double>& ys, std::vector<double>& out) const {
    const std::size_t nx = xs.size(), ny = ys.size();
    out.resize(nx * ny);
    if (kind_ == KernelKind::christoffel_darboux || kind_ == KernelKind::normalized_gue) {
        const double s = raw_scale(*this);
        const CdFeatures fx = cd_features(N_, xs, s), fy = cd_features(N_, ys, s);
        const double pref = kind_ == KernelKind::normalized_gue ? s : 1.0;
#pragma omp parallel for schedule(static)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                out[i + j * nx] = pref * cd_pair(N_, fx.x[i], fx.t[i], fy.x[j], fy.t[j]);
        return;
    }
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) out[i + j * nx] = (*this)(xs[i], ys[j]);
}

std::vector<double> KernelSpec::diag_values(const std::vector<double>& xs) const {
    std::vector<double> d(xs.size());
    if (kind_ == KernelKind::christoffel_darboux || kind_ == KernelKind::normalized_gue) {
        const double s = raw_scale(*this);
        const CdFeatures f = cd_features(N_, xs, s);
        const double pref = kind_ == KernelKind::normalized_gue ? s : 1.0;
        for (std::size_t i = 0; i < xs.size(); ++i) d[i] = pref * cd_diag(N_, f.t[i]);
        return d;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) d[i] = diag(xs[i]);
    return d;
}

double KernelSpec::length_scale() const {
    switch (kind_) {
        case KernelKind::christoffel_darboux:
            return std::numbers::pi / std::sqrt(2.0 * N_ + 1.0);
        case KernelKind::normalized_gue:
            return std::numbers::pi / (std::sqrt(2.0 * N_ + 1.0) * std::sqrt(2.0 * N_));
        default:
            return 1.0;
    }
}

double KernelSpec::effective_half_width() const {
    switch (kind_) {
        case KernelKind::christoffel_darboux:
            return std::sqrt(2.0 * N_ + 1.0) + 10.0;
        case KernelKind::normalized_gue:
            return (std::sqrt(2.0 * N_ + 1.0) + 10.0) / std::sqrt(2.0 * N_);
        default:
            return std::numeric_limits<double>::infinity();
    }
}

// ---------------------------------------------------------------------------

namespace {

struct NystromCore {
    QuadratureRule rule;
    std::vector<double> mu;  // descending, unclamped
    std::vector<double> u;   // eigenvectors of W^1/2 K W^1/2, descending order
};

NystromCore nystrom_core(const KernelSpec& k, double a, double b, int q, bool vectors) {
    const int panels = std::max(1, (q + 15) / 16);
    NystromCore c;
    c.rule = uniform_panels(a, b, (b - a) / panels * (1.0 + 1e-12));
    const int n = static_cast<int>(c.rule.size());
    std::vector<double> K;
    k.fill(c.rule.x, c.rule.x, K);
    DenseMatrix<double> M(n);
    std::vector<double> sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(c.rule.w[i]);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) M(i, j) = sw[i] * 0.5 * (K[i + j * n] + K[j + i * n]) * sw[j];
    EigenSystem<double> es = eigh(std::move(M), vectors);
    c.mu.assign(es.values.rbegin(), es.values.rend());
    if (vectors) {
        c.u.resize(static_cast<std::size_t>(n) * n);
        for (int r = 0; r < n; ++r) std::copy_n(es.vectors.col(n - 1 - r), n, c.u.begin() + static_cast<std::size_t>(r) * n);
    }
    return c;
}

}  // namespace

RestrictedKernel nystrom_restrict(const KernelSpec& k, double a, double b, int q, const NystromOptions& opt) {
    if (q < 4) throw std::invalid_argument("nystrom_restrict: order must be >= 4");
    if (!(std::isfinite(a) && std::isfinite(b) && b > a)) throw std::invalid_argument("nystrom_restrict: need finite a < b");
    NystromCore c = nystrom_core(k, a, b, q, true);
    RestrictedKernel rk;
    rk.a = a;
    rk.b = b;
    rk.kernel = k;
    rk.rule = std::move(c.rule);
    const int n = static_cast<int>(rk.rule.size());
    rk.order = n;
    rk.mu.resize(n);
    for (int r = 0; r < n; ++r) rk.mu[r] = std::clamp(c.mu[r], 0.0, 1.0);
    rk.f.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int i = 0; i < n; ++i) rk.f[static_cast<std::size_t>(r) * n + i] = c.u[static_cast<std::size_t>(r) * n + i] / std::sqrt(rk.rule.w[i]);
    const std::vector<double> d = k.diag_values(rk.rule.x);
    for (int i = 0; i < n; ++i) rk.trace += rk.rule.w[i] * d[i];

    if (opt.convergence_gate) {
        const NystromCore fine = nystrom_core(k, a, b, 2 * n, false);
        double worst = 0.0;
        for (int r = 0; r < n && r < static_cast<int>(fine.mu.size()); ++r)
            if (rk.mu[r] > 1e-6) worst = std::max(worst, std::fabs(c.mu[r] - fine.mu[r]));
        rk.gate_change = worst;
        if (worst > opt.gate_tol)
            throw std::runtime_error("nystrom_restrict: convergence gate failed (order too low for the interval)");
    }

    if (opt.sampling_grid) {
        int rank = 0;
        while (rank < n && rk.mu[rank] > kSampleCutoff) ++rank;
        rk.sampled_rank = rank;
        const int G = 4 * n;
        rk.grid.resize(G + 1);
        for (int g = 0; g <= G; ++g) rk.grid[g] = a + (b - a) * g / G;
        rk.grid[G] = b;
        std::vector<double> Kg;
        k.fill(rk.grid, rk.rule.x, Kg);  // (G+1) x n
        rk.fgrid.assign(static_cast<std::size_t>(rank) * (G + 1), 0.0);
#pragma omp parallel for schedule(static)
        for (int r = 0; r < rank; ++r) {
            const double* fr = rk.f.data() + static_cast<std::size_t>(r) * n;
            for (int g = 0; g <= G; ++g) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += rk.rule.w[j] * Kg[g + static_cast<std::size_t>(j) * (G + 1)] * fr[j];
                rk.fgrid[static_cast<std::size_t>(r) * (G + 1) + g] = s / rk.mu[r];
            }
        }
    }
    return rk;
}

void RestrictedKernel::eigenfunctions_at(double x, const std::vector<int>& modes, std::vector<double>& out) const {
    const int n = static_cast<int>(rule.size());
    std::vector<double> kx;
    kernel.fill({x}, rule.x, kx);  // 1 x n
    out.assign(modes.size(), 0.0);
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const int r = modes[m];
        const double* fr = f.data() + static_cast<std::size_t>(r) * n;
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += rule.w[j] * kx[j] * fr[j];
        out[m] = s / mu[r];
    }
}

std::vector<double> sample_dpp(const RestrictedKernel& rk, Philox& rng) {
    if (rk.grid.empty()) throw std::invalid_argument("sample_dpp: restricted kernel built without a sampling grid");
    std::vector<int> modes;
    for (int r = 0; r < static_cast<int>(rk.mu.size()); ++r) {
        const double u = rng.uniform();
        if (r < rk.sampled_rank && u < rk.mu[r]) modes.push_back(r);
    }
    const int k = static_cast<int>(modes.size());
    std::vector<double> pts;
    if (k == 0) return pts;
    const int G1 = static_cast<int>(rk.grid.size());
    // V[g * k + m] = f_{modes[m]}(grid_g)
    std::vector<double> V(static_cast<std::size_t>(G1) * k);
    for (int g = 0; g < G1; ++g)
        for (int m = 0; m < k; ++m) V[static_cast<std::size_t>(g) * k + m] = rk.fgrid[static_cast<std::size_t>(modes[m]) * G1 + g];
    std::vector<double> dens(G1), basis;  // basis: orthonormal vectors in R^k, row-stacked
    std::vector<double> cell(G1 - 1);
    std::vector<double> v;
    for (int step = 0; step < k; ++step) {
        for (int g = 0; g < G1; ++g) {
            const double* row = V.data() + static_cast<std::size_t>(g) * k;
            double s = 0.0;
            for (int m = 0; m < k; ++m) s += row[m] * row[m];
            for (int l = 0; l < step; ++l) {
                const double* e = basis.data() + static_cast<std::size_t>(l) * k;
                double p = 0.0;
                for (int m = 0; m < k; ++m) p += e[m] * row[m];
                s -= p * p;
            }
            dens[g] = std::max(s, 0.0);
        }
        double total = 0.0;
        for (int g = 0; g + 1 < G1; ++g) {
            cell[g] = 0.5 * (rk.grid[g + 1] - rk.grid[g]) * (dens[g] + dens[g + 1]);
            total += cell[g];
        }
        if (!(total > 0.0)) throw std::runtime_error("sample_dpp: conditional density vanished (discretization too coarse)");
        double u = rng.uniform() * total;
        int g = 0;
        while (g + 2 < G1 && u >= cell[g]) u -= cell[g++];
        const double h = rk.grid[g + 1] - rk.grid[g];
        const double d0 = dens[g], d1 = dens[g + 1];
        // invert the linear density on the cell: d0 t + (d1 - d0) t^2 / 2 = u / h
        const double mass = std::clamp(u / h, 0.0, 0.5 * (d0 + d1));
        double t;
        const double disc = d0 * d0 + 2.0 * (d1 - d0) * mass;
        const double den = d0 + std::sqrt(std::max(disc, 0.0));
        t = den > 0.0 ? 2.0 * mass / den : rng.uniform();
        t = std::clamp(t, 0.0, 1.0);
        const double x = rk.grid[g] + t * h;
        pts.push_back(x);
        if (step + 1 == k) break;
        rk.eigenfunctions_at(x, modes, v);
        for (int l = 0; l < step; ++l) {
            const double* e = basis.data() + static_cast<std::size_t>(l) * k;
            double p = 0.0;
            for (int m = 0; m < k; ++m) p += e[m] * v[m];
            for (int m = 0; m < k; ++m) v[m] -= p * e[m];
        }
        double nv = 0.0;
        for (double c : v) nv += c * c;
        nv = std::sqrt(nv);
        if (!(nv > 0.0)) throw std::runtime_error("sample_dpp: degenerate conditional step");
        for (double& c : v) c /= nv;
        basis.insert(basis.end(), v.begin(), v.end());
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

CountingMoments counting_moments(const RestrictedKernel& rk) {
    CountingMoments m;
    const int n = static_cast<int>(rk.rule.size());
    m.mean_trace = rk.trace;
    std::vector<double> K;
    rk.kernel.fill(rk.rule.x, rk.rule.x, K);
    CompensatedSum s2;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double v = K[i + static_cast<std::size_t>(j) * n];
            s2.add(rk.rule.w[i] * rk.rule.w[j] * v * v);
        }
    m.var_kernel = rk.trace - s2.value();
    CompensatedSum a, b;
    for (double mu : rk.mu) {
        a.add(mu);
        b.add(mu * (1.0 - mu));
    }
    m.mean_spectral = a.value();
    m.var_spectral = b.value();
    return m;
}

double expected_count(const KernelSpec& k, double a, double b) {
    if (k.kind() == KernelKind::sine) {
        if (!(std::isfinite(a) && std::isfinite(b))) throw std::invalid_argument("expected_count: infinite sine interval");
        return b - a;
    }
    const double W = k.effective_half_width();
    const double lo = std::max(a, -W), hi = std::min(b, W);
    if (!(hi > lo)) return 0.0;
    const QuadratureRule r = uniform_panels(lo, hi, 2.0 * k.length_scale());
    const std::vector<double> d = k.diag_values(r.x);
    CompensatedSum s;
    for (std::size_t i = 0; i < r.size(); ++i) s.add(r.w[i] * d[i]);
    return s.value();
}

std::vector<double> hermite_gram(int N, double a, double b) {
    const double W = std::sqrt(2.0 * N + 1.0) + 10.0;
    const double lo = std::max(a, -W), hi = std::min(b, W);
    std::vector<double> C(static_cast<std::size_t>(N) * N, 0.0);
    if (!(hi > lo)) return C;
    const QuadratureRule r = uniform_panels(lo, hi, std::numbers::pi / std::sqrt(2.0 * N + 1.0));
    const std::size_t nq = r.size();
    std::vector<double> Phi(nq * N);  // row-major nodes x N, pre-multiplied by sqrt(w)
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < nq; ++i) {
        oscillator_values(N - 1, r.x[i], Phi.data() + i * N);
        const double sw = std::sqrt(r.w[i]);
        for (int j = 0; j < N; ++j) Phi[i * N + j] *= sw;
    }
#pragma omp parallel for schedule(dynamic, 4)
    for (int j = 0; j < N; ++j) {
        for (int k = j; k < N; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < nq; ++i) s += Phi[i * N + j] * Phi[i * N + k];
            C[static_cast<std::size_t>(j) * N + k] = C[static_cast<std::size_t>(k) * N + j] = s;
        }
    }
    return C;
}

std::vector<double> projection_occupations(int N, double a, double b) {
    const std::vector<double> C = hermite_gram(N, a, b);
    DenseMatrix<double> M(N);
    std::copy(C.begin(), C.end(), M.a.begin());
    std::vector<double> ev = eigh(std::move(M), false).values;
    std::reverse(ev.begin(), ev.end());
    for (double& m : ev) m = std::clamp(m, 0.0, 1.0);
    return ev;
}

// ---------------------------------------------------------------------------

namespace {

// Total mass of K(y,y) outside [-W, W], in the kernel's own variable.
double outside_mass(const KernelSpec& k, double W) {
    const double L = 2.0 * k.length_scale();
    const double unit = k.kind() == KernelKind::normalized_gue ? 1.0 / std::sqrt(2.0 * k.N()) : 1.0;
    const double far = W + 20.0 * unit;
    const QuadratureRule r = uniform_panels(W, far, L);
    const std::vector<double> d = k.diag_values(r.x);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::fabs(d[i]);
    return 2.0 * s;  // even in y
}

}  // namespace

double complement_variance(const KernelSpec& k, Interval J, double* tail) {
    if (!(J.b > J.a)) {
        if (tail) *tail = 0.0;
        return 0.0;
    }
    if (k.kind() == KernelKind::sine) {
        if (!(std::isfinite(J.a) && std::isfinite(J.b))) throw std::invalid_argument("complement_variance: infinite sine interval");
        // projection identity: int_R K(x,y)^2 dy = K(x,x) = 1
        const QuadratureRule r = uniform_panels(J.a, J.b, 1.0);
        if (tail) *tail = 0.0;
        return (J.b - J.a) - weighted_square_sum(k, r, r);
    }
    if (k.kind() == KernelKind::custom) throw std::invalid_argument("complement_variance: custom kernels unsupported");
    const double W = k.effective_half_width();
    const double L = k.length_scale();
    const double ja = std::max(J.a, -W), jb = std::min(J.b, W);
    if (!(jb > ja)) {
        if (tail) *tail = 0.0;
        return 0.0;
    }
    const QuadratureRule rj = uniform_panels(ja, jb, L);
    QuadratureRule rc;
    if (ja > -W) rc = uniform_panels(-W, ja, L);
    if (jb < W) {
        const QuadratureRule right = uniform_panels(jb, W, L);
        rc.x.insert(rc.x.end(), right.x.begin(), right.x.end());
        rc.w.insert(rc.w.end(), right.w.begin(), right.w.end());
    }
    const double val = rc.size() ? weighted_square_sum(k, rj, rc) : 0.0;
    if (tail) *tail = outside_mass(k, W);
    return val;
}

RestrictionDiagnostics restriction_diagnostics(const KernelSpec& k, Interval J, Interval I, int order) {
    if (!(I.a >= J.a && I.b <= J.b && I.b >= I.a)) throw std::invalid_argument("restriction_diagnostics: need I subset of J");
    RestrictionDiagnostics d;
    d.A = complement_variance(k, J, &d.A_tail);
    if (I.a == J.a && I.b == J.b) {
        d.B = d.A;
        d.B_tail = d.A_tail;
    } else {
        d.B = complement_variance(k, I, &d.B_tail);
    }
    if (d.A_tail > 0.01 * d.A || d.B_tail > 0.01 * d.B)
        throw std::runtime_error("restriction_diagnostics: truncation tail exceeds 1% of the value");
    d.trace_I = expected_count(k, I.a, I.b);
    std::vector<double> mu;
    if (k.kind() == KernelKind::sine) {
        const int q = order > 0 ? order : std::max(32, static_cast<int>(std::ceil(16.0 * (J.b - J.a))) + 16);
        NystromOptions opt;
        opt.convergence_gate = false;
        RestrictedKernel rk = nystrom_restrict(k, J.a, J.b, q, opt);
        mu = rk.mu;
        d.route = "projection identity (sine), Nystrom spectrum";
    } else {
        const double s = raw_scale(k);
        mu = projection_occupations(k.N(), s * J.a, s * J.b);
        d.route = "complement double quadrature, Gram spectrum";
    }
    CompensatedSum a2, as;
    for (double m : mu) {
        a2.add(m * m * (1.0 - m) * (1.0 - m));
        as.add(m * (1.0 - m));
    }
    d.lhs_A2 = a2.value();
    d.A_spectral = as.value();
    return d;
}

}  // namespace gml
