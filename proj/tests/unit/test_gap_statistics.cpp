#include <cmath>

#include "doctest.h"
#include "gml/gap_statistics.hpp"
#include "gml/parallel.hpp"
#include "gml/special_functions.hpp"
#include "gml/stats.hpp"

using namespace gml;

namespace {
MinorChain ladder(int N) {
    MinorChain c;
    c.spectra.resize(2);
    for (int k = 1; k <= N; ++k) c.spectra[0].eigenvalues.push_back(k);
    for (int k = 1; k < N; ++k) c.spectra[1].eigenvalues.push_back(k + 0.25);
    return c;
}
}  // namespace

TEST_CASE("gap normalization by hand") {
    CHECK(rho_sc(0.0) == doctest::Approx(2.0 / 3.14159265358979323846));
    CHECK(gap_scale(10, 5) == doctest::Approx(std::sqrt(5.0) * rho_sc(0.0)));
    const GapSample s = interlacing_gaps(ladder(10), 4, 6);
    REQUIRE(s.g.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(s.g[k] == doctest::Approx(gap_scale(10, 4 + k)));
        CHECK(s.g_tilde[k] == doctest::Approx(0.25 * gap_scale(10, 4 + k)));
    }
    CHECK_THROWS_AS(interlacing_gaps(ladder(10), 1, 2), std::out_of_range);
    CHECK_THROWS_AS(normalized_gaps({0.0, 1.0}, 2, 2), std::out_of_range);
    MinorChain bad = ladder(10);
    bad.spectra[1].eigenvalues[3] = 0.5;
    CHECK_THROWS_AS(interlacing_gaps(bad, 4, 6), std::runtime_error);
}

TEST_CASE("bulk window") {
    CHECK(in_bulk(50, 100, 0.2));
    CHECK(in_bulk(20, 100, 0.2));
    CHECK_FALSE(in_bulk(19, 100, 0.2));
    CHECK_FALSE(in_bulk(81, 100, 0.2));
}

TEST_CASE("counting statistic identities") {
    Philox rng(3);
    const int N = 300;
    const std::vector<double> eig = sample_gue_eigenvalues(N, [] {
        std::vector<int> v(300);
        for (int k = 0; k < 300; ++k) v[k] = k;
        return v;
    }(), rng);
    for (double x : {-0.4, 0.0, 0.3})
        for (double t : {-2.0, 0.0, 1.5})
            for (double h : {0.0, 0.5, 4.0}) {
                CHECK(counting_statistic(eig, x, t, h, N) == right_count(eig, x, t, N) - right_count(eig, x, t + h, N));
                if (h == 0.0) CHECK(counting_statistic(eig, x, t, h, N) == 0);
            }
    CHECK(right_count(eig, 0.0, -1e6, N) == N);
    CHECK(bulk_rescale_inverse(0.3, bulk_rescale(0.3, 1.7, N), N) == doctest::Approx(1.7));
}

TEST_CASE("mean counting statistic in unfolded units") {
    const int N = 1000;
    std::vector<int> idx;
    for (int k = N / 2 - 25; k < N / 2 + 25; ++k) idx.push_back(k);
    const auto counts = run_trials(2000, 11, 1, [&](long, Philox& rng) {
        return double(counting_statistic(sample_gue_eigenvalues(N, idx, rng), 0.0, 0.0, 3.0, N));
    });
    const MeanVar mv = mean_var(counts);
    CHECK(std::fabs(mv.mean - 3.0) < 0.1);
    // number variance of a short window grows like (1/pi^2) log h; at h = 3 it lies well below Poisson
    CHECK(mv.var < 1.0);
    CHECK(mv.var > 0.2);
}

TEST_CASE("bulk gaps from direct diagonalization have unit mean") {
    const int N = 200;
    const auto g = run_trials(400, 4, 2, [&](long, Philox& rng) {
        const GueMatrix H = sample_gue(N, rng);
        const MinorChain ch = minor_chain(H.H, 1);
        const GapSample s = interlacing_gaps(ch, 90, 110);
        double m = 0;
        for (std::size_t k = 0; k < s.g.size(); ++k) {
            REQUIRE(s.g_tilde[k] > 0.0);
            REQUIRE(s.g_tilde[k] < s.g[k]);
            m += s.g[k];
        }
        return m / s.g.size();
    });
    CHECK(std::fabs(mean_var(g).mean - 1.0) < 0.02);
}
