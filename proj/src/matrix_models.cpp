#include "gml/matrix_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace gml {

GueMatrix sample_gue(int N, std::uint64_t seed) {
    Philox rng(seed);
    GueMatrix g = sample_gue(N, rng);
    g.seed = seed;
    return g;
}

GueMatrix sample_gue(int N, Philox& rng) {
    if (N < 1) throw std::invalid_argument("sample_gue: N < 1");
    GueMatrix g;
    g.N = N;
    g.H = DenseMatrix<cplx>(N);
    const double sd_diag = std::sqrt(0.5);
    for (int j = 0; j < N; ++j) {
        g.H(j, j) = cplx(sd_diag * rng.normal(), 0.0);
        for (int i = j + 1; i < N; ++i) {
            const double re = 0.5 * rng.normal();
            const double im = 0.5 * rng.normal();
            g.H(i, j) = cplx(re, im);
            g.H(j, i) = cplx(re, -im);
        }
    }
    return g;
}

Spectrum eigen_hermitian(const DenseMatrix<cplx>& H, bool want_vectors, Exec ex) {
    EigenSystem<cplx> es = eigh(H, want_vectors, ex);
    Spectrum s;
    s.level = H.n;
    s.eigenvalues = std::move(es.values);
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i)
        if (s.eigenvalues[i] == s.eigenvalues[i - 1]) s.tie = true;
    if (want_vectors) {
        s.has_vectors = true;
        s.vectors = std::move(es.vectors);
    }
    return s;
}

DenseMatrix<cplx> leading_block(const DenseMatrix<cplx>& H, int M) {
    DenseMatrix<cplx> B(M);
    for (int j = 0; j < M; ++j) std::copy_n(H.col(j), M, B.col(j));
    return B;
}

bool interlaces(const std::vector<double>& big, const std::vector<double>& small) {
    if (small.size() + 1 != big.size()) return false;
    for (std::size_t i = 0; i < small.size(); ++i)
        if (!(big[i] < small[i] && small[i] < big[i + 1])) return false;
    return true;
}

MinorChain minor_chain(const DenseMatrix<cplx>& H, int k, Exec ex) {
    const int N = H.n;
    if (k < 0 || k >= N) throw std::invalid_argument("minor_chain: need 0 <= k < N");
    MinorChain c;
    for (int M = N; M >= N - k; --M) {
        c.spectra.push_back(eigen_hermitian(M == N ? H : leading_block(H, M), false, ex));
        if (c.spectra.size() > 1) {
            const auto& big = c.spectra[c.spectra.size() - 2].eigenvalues;
            if (!interlaces(big, c.spectra.back().eigenvalues))
                throw std::runtime_error("minor_chain: interlacing violated at level " + std::to_string(M));
        }
    }
    return c;
}

double SchurResult::max_residual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, r);
    return m;
}

SchurResult schur_residual(const DenseMatrix<cplx>& H) {
    const int N = H.n;
    if (N < 2) throw std::invalid_argument("schur_residual: N < 2");
    const std::vector<double> lam = eigen_hermitian(H).eigenvalues;
    const Spectrum minor = eigen_hermitian(leading_block(H, N - 1), true);
    std::vector<double> w(N - 1);
    for (int j = 0; j < N - 1; ++j) {
        cplx x{};
        const cplx* v = minor.vectors.col(j);
        for (int r = 0; r < N - 1; ++r) x += std::conj(v[r]) * H(r, N - 1);
        w[j] = std::norm(x);
    }
    const double a = H(N - 1, N - 1).real();
    SchurResult out;
    out.residuals.resize(N);
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j = 0; j < N - 1; ++j) {
            const double d = minor.eigenvalues[j] - lam[i];
            if (std::fabs(d) < 1e-13) out.near_degenerate = true;
            s += w[j] / d;
        }
        out.residuals[i] = std::fabs(a - lam[i] - s);
    }
    return out;
}

Tridiagonal sample_gue_tridiagonal(int N, Philox& rng) {
    Tridiagonal t;
    t.d.resize(N);
    t.e.resize(N > 0 ? N - 1 : 0);
    const double sd = std::sqrt(0.5);
    for (int i = 0; i < N; ++i) t.d[i] = sd * rng.normal();
    for (int k = 0; k + 1 < N; ++k) {
        std::gamma_distribution<double> g(static_cast<double>(N - 1 - k), 1.0);
        t.e[k] = std::sqrt(0.5 * g(rng));
    }
    return t;
}

std::vector<double> sample_gue_eigenvalues(int N, const std::vector<int>& indices, Philox& rng) {
    const Tridiagonal t = sample_gue_tridiagonal(N, rng);
    std::vector<double> out(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) out[k] = tridiagonal_kth_eigenvalue(t, indices[k]);
    return out;
}

namespace {

// f(x) = corner - (o + x) - sum_j w_j / (c_j - x), c_j = minor_j - o.
struct Secular {
    const std::vector<double>& c;
    const std::vector<double>& w;
    double base;  // corner - o

    void eval(double x, double& f, double& df) const {
        double s = 0.0, ds = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            const double inv = 1.0 / (c[j] - x);
            const double t = w[j] * inv;
            s += t;
            ds += t * inv;
        }
        f = base - x - s;
        df = -1.0 - ds;
    }
};

}  // namespace

double secular_root(const std::vector<double>& minor, const std::vector<double>& weights, double corner, int i) {
    const int n = static_cast<int>(minor.size());
    if (i < 0 || i > n) throw std::out_of_range("secular_root: index");
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    const double reach = std::sqrt(wsum) + 1.0;
    const double left = i > 0 ? minor[i - 1] : std::min(corner, minor.front()) - reach;
    const double right = i < n ? minor[i] : std::max(corner, minor.back()) + reach;
    // f decreases from +inf at the left pole to -inf at the right pole.  Work in
    // an offset from the pole nearer the root so tiny distances stay accurate.
    double origin;
    {
        const double mid = 0.5 * (left + right);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += weights[j] / (minor[j] - mid);
        const double fm = corner - mid - s;
        if (i == 0)
            origin = right;
        else if (i == n)
            origin = left;
        else
            origin = fm > 0.0 ? right : left;
    }
    std::vector<double> c(n);
    for (int j = 0; j < n; ++j) c[j] = minor[j] - origin;
    Secular sec{c, weights, corner - origin};
    double xl = left - origin, xr = right - origin;
    double x = 0.5 * (xl + xr);
    for (int it = 0; it < 200; ++it) {
        double f, df;
        sec.eval(x, f, df);
        if (f == 0.0) break;
        (f > 0.0 ? xl : xr) = x;
        double nx = x - f / df;
        if (!(nx > xl && nx < xr)) nx = 0.5 * (xl + xr);
        const double step = std::fabs(nx - x);
        x = nx;
        constexpr double eps = std::numeric_limits<double>::epsilon();
        if (step <= 2.0 * eps * std::fabs(x) || xr - xl <= 2.0 * eps * std::max(std::fabs(xl), std::fabs(xr))) break;
    }
    return origin + x;
}

TwoRowSample sample_two_row(int N, int first, int count, Philox& rng) {
    if (N < 2) throw std::invalid_argument("sample_two_row: N < 2");
    if (first < 0 || count < 0 || first + count > N) throw std::out_of_range("sample_two_row: index range");
    TwoRowSample s;
    s.minor = tridiagonal_eigenvalues(sample_gue_tridiagonal(N - 1, rng));
    s.weights.resize(N - 1);
    for (int j = 0; j < N - 1; ++j) s.weights[j] = 0.5 * rng.exponential();
    s.corner = std::sqrt(0.5) * rng.normal();
    s.first = first;
    s.top.resize(count);
    for (int k = 0; k < count; ++k) s.top[k] = secular_root(s.minor, s.weights, s.corner, first + k);
    return s;
}

}  // namespace gml
