#pragma once
#include <complex>
#include <vector>

#include "gml/parallel.hpp"

namespace gml {

using cplx = std::complex<double>;

// Column-major square matrix.
template <class T>
struct DenseMatrix {
    int n = 0;
    std::vector<T> a;
    DenseMatrix() = default;
    explicit DenseMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_) {}
    T& operator()(int i, int j) { return a[i + static_cast<std::size_t>(j) * n]; }
    const T& operator()(int i, int j) const { return a[i + static_cast<std::size_t>(j) * n]; }
    T* col(int j) { return a.data() + static_cast<std::size_t>(j) * n; }
    const T* col(int j) const { return a.data() + static_cast<std::size_t>(j) * n; }
};

// Real symmetric tridiagonal: d diagonal, e[k] couples k and k+1 (size n-1).
struct Tridiagonal {
    std::vector<double> d;
    std::vector<double> e;
    int size() const { return static_cast<int>(d.size()); }
};

template <class T>
struct HouseholderBasis {
    int n = 0;
    std::vector<std::vector<T>> v;  // v[k] acts on rows k+1..n-1
    std::vector<double> tau;
    std::vector<T> phase;  // diagonal D making the tridiagonal real
};

// Reduces A (overwritten) to T = Q^* A Q.  Only the lower triangle need be
// exact on input; the full matrix is read.
template <class T>
Tridiagonal tridiagonalize(DenseMatrix<T>& A, Exec ex = Exec::parallel, HouseholderBasis<T>* basis = nullptr);

// Eigenvalues ascending (implicit QL).  Throws std::runtime_error past the
// iteration cap.
std::vector<double> tridiagonal_eigenvalues(Tridiagonal t);

// Eigenvalues ascending and eigenvectors as columns of Z (column-major n x n).
void tridiagonal_eigensystem(Tridiagonal t, std::vector<double>& values, std::vector<double>& Z);

// Number of eigenvalues strictly below x.
int sturm_count(const Tridiagonal& t, double x);

// k-th smallest eigenvalue (0-based) by Sturm bisection to full precision.
double tridiagonal_kth_eigenvalue(const Tridiagonal& t, int k);

template <class T>
struct EigenSystem {
    std::vector<double> values;
    DenseMatrix<T> vectors;  // empty unless requested
};

template <class T>
EigenSystem<T> eigh(DenseMatrix<T> A, bool want_vectors, Exec ex = Exec::parallel);

template <class T>
double frobenius_norm(const DenseMatrix<T>& A);

// ||A V - V diag(lambda)||_F
template <class T>
double eigen_residual(const DenseMatrix<T>& A, const EigenSystem<T>& es);

}  // namespace gml
