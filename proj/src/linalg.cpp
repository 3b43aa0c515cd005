#include "gml/linalg.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gml {

namespace {

inline double cj(double x) { return x; }
inline cplx cj(const cplx& z) { return std::conj(z); }
inline double re(double x) { return x; }
inline double re(const cplx& z) { return z.real(); }
inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& z) { return std::norm(z); }
inline double unit_phase(double x) { return x < 0.0 ? -1.0 : 1.0; }
inline cplx unit_phase(const cplx& z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : cplx(1.0, 0.0);
}

constexpr int kParallelMin = 96;

// p_i = tau * sum_j B_ij v_j over the trailing block starting at row/col k0.
// B is Hermitian so row i is the conjugate of column i, which is contiguous.
template <class T, bool Par>
void reflector_product(const DenseMatrix<T>& A, int k0, const std::vector<T>& v, double tau, std::vector<T>& p) {
    const int m = A.n - k0;
#pragma omp parallel for schedule(static) if (Par && m >= kParallelMin)
    for (int i = 0; i < m; ++i) {
        const T* c = A.col(k0 + i) + k0;
        T s{};
        for (int j = 0; j < m; ++j) s += cj(c[j]) * v[j];
        p[i] = tau * s;
    }
}

template <class T, bool Par>
void rank2_update(DenseMatrix<T>& A, int k0, const std::vector<T>& v, const std::vector<T>& w) {
    const int m = A.n - k0;
#pragma omp parallel for schedule(static) if (Par && m >= kParallelMin)
    for (int j = 0; j < m; ++j) {
        T* c = A.col(k0 + j) + k0;
        const T wj = cj(w[j]), vj = cj(v[j]);
        for (int i = 0; i < m; ++i) c[i] -= v[i] * wj + w[i] * vj;
    }
}

template <class T, bool Par>
void apply_reflector_to_columns(DenseMatrix<T>& X, int k0, const std::vector<T>& v, double tau) {
    const int n = X.n;
    const int m = n - k0;
#pragma omp parallel for schedule(static) if (Par && n >= kParallelMin)
    for (int c = 0; c < n; ++c) {
        T* x = X.col(c) + k0;
        T s{};
        for (int i = 0; i < m; ++i) s += cj(v[i]) * x[i];
        s *= tau;
        for (int i = 0; i < m; ++i) x[i] -= s * v[i];
    }
}

template <class T, bool Par>
Tridiagonal tridiagonalize_impl(DenseMatrix<T>& A, HouseholderBasis<T>* basis) {
    const int n = A.n;
    if (basis) {
        basis->n = n;
        basis->v.assign(n > 2 ? n - 2 : 0, {});
        basis->tau.assign(n > 2 ? n - 2 : 0, 0.0);
    }
    std::vector<T> v, p, w;
    for (int k = 0; k + 2 < n; ++k) {
        const int k0 = k + 1, m = n - k0;
        T* x = A.col(k) + k0;
        double alpha2 = 0.0;
        for (int i = 0; i < m; ++i) alpha2 += abs2(x[i]);
        const double alpha = std::sqrt(alpha2);
        if (alpha == 0.0) continue;
        const double ax0 = std::abs(x[0]);
        const T ph = unit_phase(x[0]);
        v.assign(x, x + m);
        v[0] += ph * alpha;
        const double tau = 1.0 / (alpha * (alpha + ax0));
        p.resize(m);
        reflector_product<T, Par>(A, k0, v, tau, p);
        T K{};
        for (int i = 0; i < m; ++i) K += cj(v[i]) * p[i];
        K *= 0.5 * tau;
        w.resize(m);
        for (int i = 0; i < m; ++i) w[i] = p[i] - K * v[i];
        rank2_update<T, Par>(A, k0, v, w);
        const T sub = -ph * alpha;
        x[0] = sub;
        A(k, k0) = cj(sub);
        for (int i = 1; i < m; ++i) {
            x[i] = T{};
            A(k, k0 + i) = T{};
        }
        if (basis) {
            basis->v[k] = v;
            basis->tau[k] = tau;
        }
    }
    Tridiagonal t;
    t.d.resize(n);
    t.e.resize(n > 0 ? n - 1 : 0);
    std::vector<T> phase(n, T(1.0));
    for (int i = 0; i < n; ++i) t.d[i] = re(A(i, i));
    for (int k = 0; k + 1 < n; ++k) {
        const T ek = A(k + 1, k);
        const double a = std::abs(ek);
        t.e[k] = a;
        phase[k + 1] = a > 0.0 ? phase[k] * (ek / a) : phase[k];
    }
    if (basis) basis->phase = std::move(phase);
    return t;
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::fabs(a) : -std::fabs(a); }

// Implicit-shift QL on (d, e) with e[k] coupling k, k+1.  z (column-major,
// n x n) is rotated along when non-null.
void tql(std::vector<double>& d, std::vector<double>& e_in, double* z, int n) {
    std::vector<double> e(n, 0.0);
    std::copy(e_in.begin(), e_in.end(), e.begin());
    const int cap = 60;
    const double eps = std::numeric_limits<double>::epsilon();
    // Deflation against the norm of the whole matrix.  A relative test stalls
    // on blocks of near-zero eigenvalues, and a running norm stalls on graded
    // matrices whose small entries come first; eps * |T| is the accuracy the
    // reduction to tridiagonal form delivers anyway.
    double tst = 0.0;
    for (int l = 0; l < n; ++l) tst = std::max(tst, std::fabs(d[l]) + std::fabs(e[l]) + (l > 0 ? std::fabs(e[l - 1]) : 0.0));
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m)
                if (std::fabs(e[m]) <= eps * tst) break;
            if (m != l) {
                if (iter++ == cap) throw std::runtime_error("tql: no convergence within iteration cap");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        double* zi = z + static_cast<std::size_t>(i) * n;
                        double* zi1 = zi + n;
                        for (int k = 0; k < n; ++k) {
                            f = zi1[k];
                            zi1[k] = s * zi[k] + c * f;
                            zi[k] = c * zi[k] - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

template <class T>
Tridiagonal tridiagonalize(DenseMatrix<T>& A, Exec ex, HouseholderBasis<T>* basis) {
    return ex == Exec::parallel ? tridiagonalize_impl<T, true>(A, basis) : tridiagonalize_impl<T, false>(A, basis);
}

std::vector<double> tridiagonal_eigenvalues(Tridiagonal t) {
    const int n = t.size();
    tql(t.d, t.e, nullptr, n);
    std::sort(t.d.begin(), t.d.end());
    return t.d;
}

void tridiagonal_eigensystem(Tridiagonal t, std::vector<double>& values, std::vector<double>& Z) {
    const int n = t.size();
    std::vector<double> z(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) z[i + static_cast<std::size_t>(i) * n] = 1.0;
    tql(t.d, t.e, z.data(), n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return t.d[a] < t.d[b]; });
    values.resize(n);
    Z.resize(static_cast<std::size_t>(n) * n);
    for (int c = 0; c < n; ++c) {
        values[c] = t.d[order[c]];
        std::copy_n(z.begin() + static_cast<std::size_t>(order[c]) * n, n, Z.begin() + static_cast<std::size_t>(c) * n);
    }
}

int sturm_count(const Tridiagonal& t, double x) {
    const int n = t.size();
    int count = 0;
    double q = 1.0;
    const double tiny = std::numeric_limits<double>::min();
    for (int i = 0; i < n; ++i) {
        const double off = i > 0 ? t.e[i - 1] * t.e[i - 1] / q : 0.0;
        q = t.d[i] - x - off;
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

double tridiagonal_kth_eigenvalue(const Tridiagonal& t, int k) {
    const int n = t.size();
    if (k < 0 || k >= n) throw std::out_of_range("tridiagonal_kth_eigenvalue: index");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::fabs(t.e[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(t.e[i]) : 0.0);
        lo = std::min(lo, t.d[i] - r);
        hi = std::max(hi, t.d[i] + r);
    }
    // invariant: count(lo) <= k < count(hi)
    lo -= 1e-12 * (1.0 + std::fabs(lo));
    hi += 1e-12 * (1.0 + std::fabs(hi));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (sturm_count(t, mid) <= k ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

template <class T>
EigenSystem<T> eigh(DenseMatrix<T> A, bool want_vectors, Exec ex) {
    const int n = A.n;
    EigenSystem<T> out;
    if (!want_vectors) {
        out.values = tridiagonal_eigenvalues(tridiagonalize(A, ex, static_cast<HouseholderBasis<T>*>(nullptr)));
        return out;
    }
    HouseholderBasis<T> hb;
    Tridiagonal t = tridiagonalize(A, ex, &hb);
    std::vector<double> Z;
    tridiagonal_eigensystem(std::move(t), out.values, Z);
    DenseMatrix<T> X(n);
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < n; ++i) X(i, c) = hb.phase[i] * Z[i + static_cast<std::size_t>(c) * n];
    for (int k = static_cast<int>(hb.v.size()) - 1; k >= 0; --k) {
        if (hb.tau[k] == 0.0) continue;
        if (ex == Exec::parallel)
            apply_reflector_to_columns<T, true>(X, k + 1, hb.v[k], hb.tau[k]);
        else
            apply_reflector_to_columns<T, false>(X, k + 1, hb.v[k], hb.tau[k]);
    }
    out.vectors = std::move(X);
    return out;
}

template <class T>
double frobenius_norm(const DenseMatrix<T>& A) {
    double s = 0.0;
    for (const T& x : A.a) s += abs2(x);
    return std::sqrt(s);
}

template <class T>
double eigen_residual(const DenseMatrix<T>& A, const EigenSystem<T>& es) {
    const int n = A.n;
    double s = 0.0;
#pragma omp parallel for reduction(+ : s) schedule(static)
    for (int c = 0; c < n; ++c) {
        const T* v = es.vectors.col(c);
        for (int i = 0; i < n; ++i) {
            T acc{};
            for (int j = 0; j < n; ++j) acc += A(i, j) * v[j];
            acc -= es.values[c] * v[i];
            s += abs2(acc);
        }
    }
    return std::sqrt(s);
}

template Tridiagonal tridiagonalize<double>(DenseMatrix<double>&, Exec, HouseholderBasis<double>*);
template Tridiagonal tridiagonalize<cplx>(DenseMatrix<cplx>&, Exec, HouseholderBasis<cplx>*);
template EigenSystem<double> eigh<double>(DenseMatrix<double>, bool, Exec);
template EigenSystem<cplx> eigh<cplx>(DenseMatrix<cplx>, bool, Exec);
template double frobenius_norm<double>(const DenseMatrix<double>&);
template double frobenius_norm<cplx>(const DenseMatrix<cplx>&);
template double eigen_residual<double>(const DenseMatrix<double>&, const EigenSystem<double>&);
template double eigen_residual<cplx>(const DenseMatrix<cplx>&, const EigenSystem<cplx>&);

}  // namespace gml
