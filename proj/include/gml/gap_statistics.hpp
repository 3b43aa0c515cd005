#pragma once
#include <cstdint>
#include <vector>

#include "gml/check.hpp"
#include "gml/matrix_models.hpp"

namespace gml {

// Indices are 1-based as in the usual lambda_1 < ... < lambda_N convention.
bool in_bulk(int i, int N, double delta);

// sqrt(N/2) rho_sc(gamma_{i/N})
double gap_scale(int N, int i);

// g_i for i in [i_first, i_last]; eigenvalues is the full ascending spectrum.
// Throws std::out_of_range for indices outside the bulk window.
std::vector<double> normalized_gaps(const std::vector<double>& eigenvalues, int i_first, int i_last, double delta = 0.2);

struct GapSample {
    int N = 0;
    int i_first = 0;
    std::vector<double> g;        // g_{i_first} ...
    std::vector<double> g_tilde;  // interlacing gaps, same indices
};

// g and g-tilde from a chain with levels N and N-1.  Throws std::runtime_error
// on an interlacing violation.
GapSample interlacing_gaps(const MinorChain& chain, int i_first, int i_last, double delta = 0.2);

// Same from a two-row sample holding lambda_{i_first}..lambda_{i_last+1}.
GapSample interlacing_gaps(const TwoRowSample& s, int N, int i_first, int i_last, double delta = 0.2);

// N_{x,t} = #{lambda >= f_x(t)}
long right_count(const std::vector<double>& eigenvalues, double x, double t, int N);
// N_{x,t,h} = #{lambda in [f_x(t), f_x(t+h))}
long counting_statistic(const std::vector<double>& eigenvalues, double x, double t, double h, int N);

struct GapBoundsConfig {
    std::vector<int> Ns{200, 400, 800};
    int N_primary = 400;
    double i_frac = 0.5;
    double delta = 0.2;
    long trials_tail = 100000;
    long trials_moment = 20000;
    long trials_window = 20000;
    std::vector<double> tail_h{1, 2, 3, 4};
    double C_tail = 10.0;
    std::vector<int> powers{1, 2, 4};
    double slope_tol = 0.05;
    std::vector<double> lower_h{0.1, 0.05, 0.02};
    double C_lower = 5.0;
    int m_calibrate = 4;
    std::vector<int> m_test{16, 64};
    double ratio_max = 16.0;
    std::uint64_t seed = 1;
};
SuiteResult verify_gap_bounds(const GapBoundsConfig& c);

struct UniversalityConfig {
    int N = 400;
    long trials = 20000;
    double i_frac = 0.45;
    double j_frac = 0.55;
    double floor = 0.05;
    double k_sigma = 4.0;
    double delta = 0.2;
    std::uint64_t seed = 2;
};
SuiteResult verify_universality(const UniversalityConfig& c);

struct InterlacingVarianceConfig {
    int N = 800;
    long trials = 20000;
    double i_frac = 0.5;
    std::vector<int> ms{8, 32, 64};
    double slope_max = 1.9;
    double alt_ratio_max = 0.5;
    int m_compare = 32;
    double delta = 0.2;
    std::uint64_t seed = 3;
};
SuiteResult verify_interlacing_variance(const InterlacingVarianceConfig& c);

struct GapHistogramConfig {
    int N = 400;
    long trials = 20000;
    int bins = 40;
    double lo = 0.0, hi = 4.0;
    double sup_tol = 0.05;
    double mean_tol = 0.02;
    std::uint64_t seed = 4;
};
SuiteResult gap_histogram(const GapHistogramConfig& c);

struct CountingCompareConfig {
    int N = 500;
    double x = 0.0;
    double h = 3.0;
    long trials = 20000;
    double tv_tol = 0.05;
    std::uint64_t seed = 5;
};
// Law of N_{x,0,h} from GUE spectra against the Poisson-binomial of the
// restricted kernel's occupation probabilities.
SuiteResult verify_counting_law(const CountingCompareConfig& c);

struct RigidityConfig {
    int N = 800;
    long trials = 5000;
    std::vector<double> i_fracs{0.25, 0.5, 0.75};
    double width_factor = 5.0;
    double max_fraction = 0.01;
    std::uint64_t seed = 6;
};
SuiteResult verify_rigidity(const RigidityConfig& c);

}  // namespace gml
