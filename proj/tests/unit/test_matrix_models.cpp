#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "gml/matrix_models.hpp"
#include "gml/parallel.hpp"
#include "gml/special_functions.hpp"
#include "gml/spectrum_io.hpp"
#include "gml/stats.hpp"

using namespace gml;

TEST_CASE("GUE sampling: Hermitian, real diagonal, deterministic") {
    const GueMatrix a = sample_gue(30, 5), b = sample_gue(30, 5);
    CHECK(a.H.a == b.H.a);
    for (int i = 0; i < 30; ++i) {
        CHECK(a.H(i, i).imag() == 0.0);
        for (int j = 0; j < 30; ++j) CHECK(a.H(i, j) == std::conj(a.H(j, i)));
    }
    CHECK(sample_gue(1, 9).H.n == 1);
}

TEST_CASE("GUE entry variances follow exp(-tr H^2)") {
    std::vector<double> diag, re, im;
    const auto mats = run_trials(4000, 21, 1, [](long, Philox& rng) { return sample_gue(4, rng).H; });
    for (const auto& H : mats) {
        diag.push_back(H(0, 0).real());
        re.push_back(H(1, 0).real());
        im.push_back(H(1, 0).imag());
    }
    const MeanVar d = mean_var(diag), r = mean_var(re), i = mean_var(im);
    CHECK(std::fabs(d.var - 0.5) < 4 * d.stderr_var());
    CHECK(std::fabs(r.var - 0.25) < 4 * r.stderr_var());
    CHECK(std::fabs(i.var - 0.25) < 4 * i.stderr_var());
    // oracle from the Gaussian density: E tr H^2 = N/2 + N(N-1)/2 = N^2/2
    const auto tr = run_trials(10000, 22, 1, [](long, Philox& rng) {
        const GueMatrix g = sample_gue(8, rng);
        double s = 0;
        for (const cplx& z : g.H.a) s += std::norm(z);
        return s;
    });
    const MeanVar t = mean_var(tr);
    CHECK(std::fabs(t.mean - 32.0) < 3 * t.stderr_mean());
}

TEST_CASE("minor chains interlace") {
    const GueMatrix g = sample_gue(4, 11);
    const MinorChain c = minor_chain(g.H, 3);
    REQUIRE(c.spectra.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(c.spectra[k].eigenvalues.size() == std::size_t(4 - k));
    for (int k = 0; k + 1 < 4; ++k) CHECK(interlaces(c.spectra[k].eigenvalues, c.spectra[k + 1].eigenvalues));
    CHECK(minor_chain(g.H, 0).spectra.size() == 1);
    for (std::uint64_t s = 0; s < 50; ++s) {
        const MinorChain m = minor_chain(sample_gue(40, 1000 + s).H, 1);
        CHECK(interlaces(m.spectra[0].eigenvalues, m.spectra[1].eigenvalues));
    }
    CHECK_FALSE(interlaces({0.0, 1.0}, {1.5}));
}

TEST_CASE("Schur identity") {
    DenseMatrix<cplx> H(2);
    H(0, 0) = 0.7;
    H(1, 1) = -0.2;
    H(1, 0) = cplx(0.3, -0.4);
    H(0, 1) = std::conj(H(1, 0));
    CHECK(schur_residual(H).max_residual() < 1e-12);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const SchurResult r = schur_residual(sample_gue(50, 500 + s).H);
        CHECK(r.max_residual() < 1e-7 * std::sqrt(50.0));
    }
}

TEST_CASE("Schur residual at N=4 matches characteristic-polynomial roots") {
    // oracle: roots of det(H - lambda) located by bisection of the determinant
    const GueMatrix g = sample_gue(4, 77);
    auto det = [&](double lam) {
        DenseMatrix<cplx> A = g.H;
        for (int i = 0; i < 4; ++i) A(i, i) -= lam;
        // Gaussian elimination with partial pivoting
        cplx d = 1.0;
        for (int k = 0; k < 4; ++k) {
            int p = k;
            for (int i = k + 1; i < 4; ++i)
                if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
            if (p != k) {
                for (int j = 0; j < 4; ++j) std::swap(A(k, j), A(p, j));
                d = -d;
            }
            d *= A(k, k);
            for (int i = k + 1; i < 4; ++i) {
                const cplx f = A(i, k) / A(k, k);
                for (int j = k; j < 4; ++j) A(i, j) -= f * A(k, j);
            }
        }
        return d.real();
    };
    const Spectrum s = eigen_hermitian(g.H);
    for (double lam : s.eigenvalues) {
        double lo = lam - 1e-3, hi = lam + 1e-3;
        REQUIRE(det(lo) * det(hi) < 0);
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (det(lo) * det(mid) <= 0 ? hi : lo) = mid;
        }
        CHECK(std::fabs(0.5 * (lo + hi) - lam) < 1e-10);
    }
    CHECK(schur_residual(g.H).max_residual() < 1e-10);
}

TEST_CASE("secular roots reproduce a dense arrowhead eigenproblem") {
    // [[diag(c), x], [x^*, a]] has eigenvalues solving a - l - sum |x_j|^2/(c_j - l) = 0
    const std::vector<double> c{-2.0, -0.5, 0.1, 0.2000001, 3.0};
    const std::vector<cplx> x{{0.3, 0.1}, {0.01, 0.0}, {0.5, -0.5}, {1e-4, 0.0}, {0.2, 0.2}};
    const double a = 0.4;
    DenseMatrix<cplx> H(6);
    std::vector<double> w;
    for (int j = 0; j < 5; ++j) {
        H(j, j) = c[j];
        H(j, 5) = x[j];
        H(5, j) = std::conj(x[j]);
        w.push_back(std::norm(x[j]));
    }
    H(5, 5) = a;
    const auto dense = eigen_hermitian(H).eigenvalues;
    for (int i = 0; i < 6; ++i) CHECK(std::fabs(secular_root(c, w, a, i) - dense[i]) < 1e-12);
}

TEST_CASE("fast samplers agree in law with the dense model") {
    const int N = 40, trials = 4000;
    const int i = N / 2;
    const auto dense = run_trials(trials, 31, 1, [&](long, Philox& rng) {
        const MinorChain c = minor_chain(sample_gue(N, rng).H, 1);
        return std::array<double, 3>{c.spectra[0].eigenvalues[i], c.spectra[0].eigenvalues[i + 1], c.spectra[1].eigenvalues[i]};
    });
    const auto fast = run_trials(trials, 32, 1, [&](long, Philox& rng) {
        const TwoRowSample s = sample_two_row(N, i, 2, rng);
        return std::array<double, 3>{s.top[0], s.top[1], s.minor[i]};
    });
    const auto tri = run_trials(trials, 33, 1, [&](long, Philox& rng) {
        const auto v = sample_gue_eigenvalues(N, {i, i + 1}, rng);
        return std::array<double, 3>{v[0], v[1], 0.0};
    });
    std::vector<double> gd, gf, gt, td, tf, ld, lf;
    for (int t = 0; t < trials; ++t) {
        gd.push_back(dense[t][1] - dense[t][0]);
        gf.push_back(fast[t][1] - fast[t][0]);
        gt.push_back(tri[t][1] - tri[t][0]);
        td.push_back(dense[t][2] - dense[t][0]);
        tf.push_back(fast[t][2] - fast[t][0]);
        ld.push_back(dense[t][0]);
        lf.push_back(fast[t][0]);
        CHECK(fast[t][0] < fast[t][2]);
        CHECK(fast[t][2] < fast[t][1]);
    }
    // two-sample KS critical value at alpha = 0.001 for n = m = 4000 is about 0.044
    CHECK(ks_two_sample(gd, gf) < 0.044);
    CHECK(ks_two_sample(gd, gt) < 0.044);
    CHECK(ks_two_sample(td, tf) < 0.044);
    CHECK(ks_two_sample(ld, lf) < 0.044);
}

TEST_CASE("spectral law is unitarily invariant") {
    // conjugating by a fixed unitary (a permutation with phases) leaves the moments unchanged
    const int N = 12;
    const auto m = run_trials(3000, 41, 1, [&](long, Philox& rng) {
        const GueMatrix g = sample_gue(N, rng);
        DenseMatrix<cplx> U(N);
        for (int k = 0; k < N; ++k) U((k + 5) % N, k) = std::polar(1.0, 0.7 * k);
        DenseMatrix<cplx> B(N);
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) {
                cplx s = 0;
                for (int p = 0; p < N; ++p)
                    for (int q = 0; q < N; ++q) s += U(r, p) * g.H(p, q) * std::conj(U(c, q));
                B(r, c) = s;
            }
        const auto a = eigen_hermitian(g.H).eigenvalues, b = eigen_hermitian(B).eigenvalues;
        double d = 0;
        for (int k = 0; k < N; ++k) d = std::max(d, std::fabs(a[k] - b[k]));
        return std::array<double, 2>{a.back(), d};
    });
    for (const auto& r : m) CHECK(r[1] < 1e-12);
}

TEST_CASE("Gustavsson fluctuations at the centre of the spectrum") {
    const int N = 2000, i = N / 2;
    // lambda_{N/2} sits half a spacing below the centre, 0.8 standard deviations
    // at this N, so the classical location is taken at the half-integer index.
    const double g = classical_location((i - 0.5) / N);
    const double scale = std::sqrt(std::log(double(N)) / (4.0 * (1 - g * g) * N));
    const auto xs = run_trials(5000, 51, 1, [&](long, Philox& rng) {
        const double lam = sample_gue_eigenvalues(N, {i - 1}, rng)[0];
        return (lam - g * std::sqrt(2.0 * N)) / scale;
    });
    CHECK(ks_statistic(xs, normal_cdf) < 0.05);
}

TEST_CASE("spectrum dump round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "gml_spectra_test.bin").string();
    std::vector<SpectrumRecord> recs{{400, 400, 7, 0, {-1.0, 0.5, 2.25}}, {399, 400, 7, 0, {}}, {3, 10, 1ull << 40, 9, {1e-300}}};
    write_spectra(path, recs);
    const auto back = read_spectra(path);
    REQUIRE(back.size() == recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k) {
        CHECK(back[k].level == recs[k].level);
        CHECK(back[k].N == recs[k].N);
        CHECK(back[k].seed == recs[k].seed);
        CHECK(back[k].trial == recs[k].trial);
        CHECK(back[k].eigenvalues == recs[k].eigenvalues);
    }
    std::filesystem::remove(path);
    CHECK_THROWS(read_spectra(path));
}
