#pragma once
#include <cstdint>
#include <vector>

#include "gml/linalg.hpp"
#include "gml/rng.hpp"

namespace gml {

// Density proportional to exp(-tr H^2): diagonal N(0,1/2), off-diagonal real and
// imaginary parts N(0,1/4).
struct GueMatrix {
    int N = 0;
    std::uint64_t seed = 0;
    DenseMatrix<cplx> H;
};

GueMatrix sample_gue(int N, std::uint64_t seed);
GueMatrix sample_gue(int N, Philox& rng);

struct Spectrum {
    int level = 0;
    std::vector<double> eigenvalues;  // ascending
    bool has_vectors = false;
    DenseMatrix<cplx> vectors;
    bool tie = false;  // exact tie after sorting; the trial should be discarded
};

Spectrum eigen_hermitian(const DenseMatrix<cplx>& H, bool want_vectors = false, Exec ex = Exec::parallel);

// Top-left M x M block.
DenseMatrix<cplx> leading_block(const DenseMatrix<cplx>& H, int M);

struct MinorChain {
    std::vector<Spectrum> spectra;  // levels N, N-1, ..., N-k
};

// Throws std::runtime_error if Cauchy interlacing fails between two levels.
MinorChain minor_chain(const DenseMatrix<cplx>& H, int k, Exec ex = Exec::parallel);

// big[i] < small[i] < big[i+1] for all i.
bool interlaces(const std::vector<double>& big, const std::vector<double>& small);

struct SchurResult {
    std::vector<double> residuals;  // one per eigenvalue of H
    bool near_degenerate = false;   // some |lambda'_j - lambda_i| < 1e-13
    double max_residual() const;
};

SchurResult schur_residual(const DenseMatrix<cplx>& H);

// Tridiagonal model with the same spectral law as GUE(N).
Tridiagonal sample_gue_tridiagonal(int N, Philox& rng);

// Selected eigenvalues (0-based ascending indices) of one GUE(N) draw via the
// tridiagonal model and Sturm bisection.
std::vector<double> sample_gue_eigenvalues(int N, const std::vector<int>& indices, Philox& rng);

// Joint sample of (lambda, lambda') for a GUE(N) matrix and its (N-1)-minor.
// The minor spectrum comes from the tridiagonal model of GUE(N-1); given it,
// the remaining row is (X, a) with |X_j|^2 ~ Exp(mean 1/2), a ~ N(0,1/2), and
// the level-N eigenvalues are the roots of the secular equation
//   a - lambda - sum_j |X_j|^2 / (lambda'_j - lambda) = 0.
// Only the requested level-N eigenvalues are computed.
struct TwoRowSample {
    std::vector<double> minor;    // all N-1 eigenvalues of the minor
    std::vector<double> weights;  // |X_j|^2
    double corner = 0.0;          // a = H_NN
    int first = 0;                // 0-based index of top[0]
    std::vector<double> top;      // lambda_first .. lambda_{first+count-1}
};

TwoRowSample sample_two_row(int N, int first, int count, Philox& rng);

// 0-based root index i of the secular equation, lying in (minor[i-1], minor[i]).
double secular_root(const std::vector<double>& minor, const std::vector<double>& weights, double corner, int i);

}  // namespace gml
