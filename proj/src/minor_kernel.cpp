#include "gml/minor_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gml/matrix_models.hpp"
#include "gml/parallel.hpp"
#include "gml/quadrature.hpp"
#include "gml/special_functions.hpp"
#include "gml/stats.hpp"

namespace gml {

using json = nlohmann::ordered_json;

namespace {

enum : std::uint64_t { kTagMinorVariance = 701 };

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Left edge beyond which phi_0..phi_K are below ~1e-40.
double left_edge(int K) { return -(std::sqrt(2.0 * K + 1.0) + 10.0); }

// Panel length resolving the fastest oscillation of phi_j phi_k, j,k <= K.
double panel_length(int K) { return kPi / std::sqrt(2.0 * K + 1.0); }

// Phi[n * rows + r] = phi_n(x_r), n = 0..K.
std::vector<double> oscillator_matrix(const QuadratureRule& q, int K) {
    const std::size_t rows = q.size();
    std::vector<double> phi(rows * (K + 1)), buf(K + 1);
    for (std::size_t r = 0; r < rows; ++r) {
        oscillator_values(K, q.x[r], buf.data());
        for (int n = 0; n <= K; ++n) phi[n * rows + r] = buf[n];
    }
    return phi;
}

// Direct route: int eta phi_j phi_k on (-inf, x1] with the given panel length.
std::vector<double> direct_table(const CutoffEta& eta, int j0, int j1, int k0, int k1, double len) {
    const int K = std::max(j1, k1);
    const QuadratureRule q = composite_gauss_legendre({left_edge(K), eta.x0, eta.x1}, 16, len);
    const std::size_t rows = q.size();
    const std::vector<double> phi = oscillator_matrix(q, K);
    std::vector<double> w(rows);
    for (std::size_t r = 0; r < rows; ++r) w[r] = q.w[r] * eta(q.x[r]);
    const int nj = j1 - j0 + 1, nk = k1 - k0 + 1;
    std::vector<double> out(static_cast<std::size_t>(nj) * nk);
#pragma omp parallel for schedule(dynamic, 4)
    for (int a = 0; a < nj; ++a) {
        const double* pj = &phi[static_cast<std::size_t>(j0 + a) * rows];
        std::vector<double> wj(rows);
        for (std::size_t r = 0; r < rows; ++r) wj[r] = w[r] * pj[r];
        for (int b = 0; b < nk; ++b) {
            const double* pk = &phi[static_cast<std::size_t>(k0 + b) * rows];
            double s = 0.0;
            for (std::size_t r = 0; r < rows; ++r) s += wj[r] * pk[r];
            out[static_cast<std::size_t>(a) * nk + b] = s;
        }
    }
    return out;
}

// Boundary route, only the ramp [x0, x1] contributes.
std::vector<double> wronskian_table(const CutoffEta& eta, int j0, int j1, int k0, int k1) {
    const int K = std::max(j1, k1);
    const QuadratureRule q = composite_gauss_legendre({eta.x0, eta.x1}, 16, 0.5 * panel_length(K));
    const std::size_t rows = q.size();
    const std::vector<double> phi = oscillator_matrix(q, K);
    std::vector<double> dphi(phi.size());
    for (int n = 0; n <= K; ++n)
        for (std::size_t r = 0; r < rows; ++r)
            dphi[n * rows + r] = oscillator_derivative(n, q.x[r], n > 0 ? phi[(n - 1) * rows + r] : 0.0, phi[n * rows + r]);
    const int nj = j1 - j0 + 1, nk = k1 - k0 + 1;
    std::vector<double> out(static_cast<std::size_t>(nj) * nk);
#pragma omp parallel for schedule(dynamic, 4)
    for (int a = 0; a < nj; ++a) {
        const int j = j0 + a;
        for (int b = 0; b < nk; ++b) {
            const int k = k0 + b;
            if (j == k) {
                out[static_cast<std::size_t>(a) * nk + b] = kNaN;
                continue;
            }
            CompensatedSum s;
            for (std::size_t r = 0; r < rows; ++r) {
                const double wr = phi[j * rows + r] * dphi[k * rows + r] - dphi[j * rows + r] * phi[k * rows + r];
                s.add(q.w[r] * eta.derivative(q.x[r]) * wr);
            }
            out[static_cast<std::size_t>(a) * nk + b] = -s.value() / (2.0 * (j - k));
        }
    }
    return out;
}

int default_cutoff(double m) { return std::max(200, static_cast<int>(std::ceil(20.0 * m))); }

}  // namespace

CutoffEta::CutoffEta(int i_, int N_, double m_) : N(N_), i(i_), m(m_) {
    if (N < 2 || i < 1 || i >= N) throw std::invalid_argument("CutoffEta: need 1 <= i < N");
    if (!(m > 0.0)) throw std::invalid_argument("CutoffEta: m must be positive");
    gamma = classical_location(static_cast<double>(i) / N);
    x0 = std::sqrt(2.0 * N) * gamma;
    slope = std::sqrt(0.5 * N) * rho_sc(gamma) / m;
    x1 = x0 + 1.0 / slope;
}

double CutoffEta::operator()(double x) const {
    if (x <= x0) return 1.0;
    if (x >= x1) return 0.0;
    return 1.0 - slope * (x - x0);
}

double CutoffEta::derivative(double x) const { return (x > x0 && x < x1) ? -slope : 0.0; }

double eval_eta(double x, int i, int N, double m) { return CutoffEta(i, N, m)(x); }

double alpha_constant(int i, int N, bool literal_endpoint) {
    const CutoffEta eta(i, N, 1.0);
    const double e = literal_endpoint ? eta.gamma : eta.x0;
    const double lo = left_edge(N);
    if (e <= lo) return 0.0;
    auto f = [N](double x) {
        const double p = oscillator_triple(N - 1, x).cur;
        return p * p;
    };
    // panels of one oscillation length, then adaptive refinement inside each
    const double len = panel_length(N);
    const int panels = static_cast<int>(std::ceil((e - lo) / len));
    const double h = (e - lo) / panels;
    CompensatedSum s;
    for (int p = 0; p < panels; ++p) s.add(integrate_adaptive(f, lo + p * h, lo + (p + 1) * h, 1e-10 / panels));
    return s.value();
}

AjkTable compute_ajk(int i, int N, double m, int j0, int j1, int k0, int k1) {
    if (j0 < 0 || j1 < j0 || k0 < 0 || k1 < k0) throw std::invalid_argument("compute_ajk: bad index ranges");
    const CutoffEta eta(i, N, m);
    AjkTable t;
    t.N = N;
    t.i = i;
    t.m = m;
    t.j0 = j0, t.j1 = j1, t.k0 = k0, t.k1 = k1;
    const double len = panel_length(std::max(j1, k1));
    t.direct = direct_table(eta, j0, j1, k0, k1, len);
    const std::vector<double> fine = direct_table(eta, j0, j1, k0, k1, 0.5 * len);
    t.wronskian = wronskian_table(eta, j0, j1, k0, k1);
    for (std::size_t n = 0; n < t.direct.size(); ++n) t.gate_change = std::max(t.gate_change, std::fabs(fine[n] - t.direct[n]));
    t.direct = fine;
    for (int j = j0; j <= j1; ++j)
        for (int k = k0; k <= k1; ++k) {
            if (j == k) continue;
            t.max_disagreement = std::max(t.max_disagreement, std::fabs(t.at(j, k) - t.wr(j, k)));
            t.max_envelope = std::max(t.max_envelope, std::fabs(t.at(j, k)) * std::abs(j - k));
        }
    if (t.max_disagreement > 1e-8)
        throw std::runtime_error("compute_ajk: direct and boundary routes disagree by " + fmt(t.max_disagreement));
    return t;
}

double first_moment(int i, int N, double m, bool literal_endpoint) {
    const CutoffEta eta(i, N, m);
    const AjkTable t = compute_ajk(i, N, m, N - 1, N - 1, N - 1, N - 1);
    return m * (t.at(N - 1, N - 1) - alpha_constant(i, N, literal_endpoint));
}

DivTerms div_terms(const AjkTable& t, int D) {
    const int N = t.N;
    CompensatedSum s1, s2, s3;
    for (int j = t.j0; j <= std::min(t.j1, N - 1); ++j)
        for (int k = std::max(t.k0, N - 1); k <= t.k1; ++k) {
            if (k - j > D) continue;
            const double a = t.at(j, k);
            if (k >= N) s1.add(a * a);
            if (j < N - 1) s2.add(a * a);
            if (j >= 1 && k >= N && t.contains(j - 1, k - 1))
                s3.add(std::sqrt(static_cast<double>(j) / k) * a * t.at(j - 1, k - 1));
        }
    DivTerms d;
    d.S1 = s1.value();
    d.S2 = s2.value();
    d.S3 = s3.value();
    return d;
}

VarianceFormula variance_formula(const AjkTable& t, int D) {
    VarianceFormula v;
    v.D = D;
    v.terms = div_terms(t, D);
    v.value = v.terms.corrected();
    v.verbatim = v.terms.verbatim();
    v.half_cutoff = div_terms(t, D / 2).corrected();
    v.tail_estimate = std::fabs(v.value - v.half_cutoff);
    if (v.tail_estimate > 0.01 * std::fabs(v.value))
        throw std::runtime_error("variance_formula: tail estimate " + fmt(v.tail_estimate) + " exceeds 1% of " + fmt(v.value));
    return v;
}

namespace {

// Table for the variance expression; the cutoff starts at D and doubles
// (at most three times) until the shell difference is below 1% of the value.
AjkTable variance_table(int i, int N, double m, int& D) {
    for (int round = 0;; ++round, D *= 2) {
        AjkTable t = compute_ajk(i, N, m, std::max(0, N - 1 - D), N - 1, N - 1, N - 1 + D);
        const double v = div_terms(t, D).corrected(), h = div_terms(t, D / 2).corrected();
        if (std::fabs(v - h) <= 0.01 * std::fabs(v) || round == 3) return t;
    }
}

}  // namespace

VarianceFormula variance_formula(int i, int N, double m, int D) {
    if (D <= 0) D = default_cutoff(m);
    const AjkTable t = variance_table(i, N, m, D);
    return variance_formula(t, D);
}

BlockValue eval_minor_block(MinorBlock which, int N, double x, double y, int J) {
    if (N < 2) throw std::invalid_argument("eval_minor_block: N < 2");
    BlockValue out;
    switch (which) {
        case MinorBlock::NN:
        case MinorBlock::N1N1: {
            const int top = which == MinorBlock::NN ? N - 1 : N - 2;
            std::vector<double> px(top + 1), py(top + 1);
            oscillator_values(top, x, px.data());
            oscillator_values(top, y, py.data());
            CompensatedSum s;
            for (int j = 0; j <= top; ++j) s.add(px[j] * py[j]);
            out.value = s.value();
            return out;
        }
        case MinorBlock::N1N: {
            // (y, x') -> sum_{j=1}^{N-1} sqrt(j) phi_{j-1}(y) phi_j(x')
            std::vector<double> py(N), px(N);
            oscillator_values(N - 1, x, py.data());
            oscillator_values(N - 1, y, px.data());
            CompensatedSum s;
            for (int j = 1; j <= N - 1; ++j) s.add(std::sqrt(double(j)) * py[j - 1] * px[j]);
            out.value = s.value();
            return out;
        }
        case MinorBlock::NN1: {
            // (x, y') -> -sum_{j>=N} phi_j(x) phi_{j-1}(y') / sqrt(j)
            if (J <= 0) J = 100 * N;
            const int last = N + 2 * J;
            std::vector<double> px(last + 1), py(last + 1);
            oscillator_values(last, x, px.data());
            oscillator_values(last, y, py.data());
            // Smooth cutoff: weight 1 up to N + JJ/2, then a C-infinity ramp down
            // to 0 at N + JJ.  Away from x = +-y the terms oscillate in sqrt(j), so
            // the ramp is laid out in sqrt(j); a smooth window then converges much
            // faster than sharp or Cesaro partial sums.
            auto windowed = [&](int JJ) {
                CompensatedSum s;
                const double r0 = std::sqrt(N + 0.5 * JJ), r1 = std::sqrt(double(N + JJ));
                for (int j = N; j < N + JJ; ++j) {
                    const double t = (std::sqrt(double(j)) - r0) / (r1 - r0);  // ramp variable on (0,1)
                    double w = 1.0;
                    if (t > 0.0) {
                        const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
                        w = b / (a + b);
                    }
                    s.add(-w * px[j] * py[j - 1] / std::sqrt(double(j)));
                }
                return s.value();
            };
            out.value = windowed(J);
            out.doubled = windowed(2 * J);
            out.stable = std::fabs(out.value - out.doubled) <= 1e-4;
            return out;
        }
    }
    return out;
}

SuiteResult verify_minor_variance(const MinorVarianceConfig& c) {
    SuiteResult R;
    const int N = c.N;
    const int i = static_cast<int>(std::lround(c.i_frac * N));
    int D = c.D > 0 ? c.D : default_cutoff(c.m);
    const CutoffEta eta(i, N, c.m);
    const double alpha = alpha_constant(i, N, c.literal_endpoint);

    const AjkTable t = variance_table(i, N, c.m, D);
    R.checks.push_back(make_check("minor_variance.ajk_gate", t.gate_change < 1e-10, t.gate_change, 1e-10,
                                  "a_jk change under node doubling"));
    R.checks.push_back(make_check("minor_variance.ajk_routes", t.max_disagreement < 1e-8, t.max_disagreement, 1e-8,
                                  "direct vs boundary form"));
    R.checks.push_back(make_check("minor_variance.ajk_envelope", t.max_envelope <= 2.0, t.max_envelope, 2.0,
                                  "max |a_jk| |j-k| over the table"));
    const VarianceFormula vf = variance_formula(t, D);
    const double mean_formula = c.m * (t.at(N - 1, N - 1) - alpha);

    // Monte Carlo on the two-row process: only indices whose interlacing
    // interval meets the ramp contribute to S.
    const auto recs = run_trials(c.trials, c.seed, kTagMinorVariance, [&](long, Philox& rng) {
        const TwoRowSample s = sample_two_row(N, 0, 0, rng);
        const auto& mn = s.minor;
        MinorTrial r;
        CompensatedSum S, walk;
        auto lo_it = std::upper_bound(mn.begin(), mn.end(), eta.x0);
        int first = static_cast<int>(lo_it - mn.begin());  // first minor index above x0
        for (int k = first; k <= N - 1; ++k) {
            if (k >= 1 && mn[k - 1] >= eta.x1) break;
            const double lam = secular_root(mn, s.weights, s.corner, k);
            const double lamp = k < N - 1 ? mn[k] : kNaN;
            S.add(eta(lam) - (k < N - 1 ? eta(lamp) : 0.0));
            const double hi = k < N - 1 ? std::min(lamp, eta.x1) : eta.x1;
            const double lo = std::max(lam, eta.x0);
            if (hi > lo) walk.add(hi - lo);
        }
        r.S = S.value();
        // (1/m) int_0^m F + alpha = s |union [lambda, lambda'] within the ramp|
        r.S_walk = eta.slope * walk.value();
        return r;
    });
    std::vector<double> Ss(recs.size());
    double walk_diff = 0.0;
    for (std::size_t n = 0; n < recs.size(); ++n) {
        Ss[n] = recs[n].S;
        walk_diff = std::max(walk_diff, std::fabs(recs[n].S - recs[n].S_walk));
    }
    const MeanVar mv = mean_var(Ss);
    const double mean_mc = c.m * (mv.mean - alpha);
    const double mean_se = c.m * mv.stderr_mean();
    R.checks.push_back(make_check("minor_variance.walk_consistency", walk_diff < 1e-10, walk_diff, 1e-10,
                                  "interval walking vs eta sums per trial"));
    R.checks.push_back(make_check("minor_variance.first_moment", std::fabs(mean_mc - mean_formula) <= c.k_sigma * mean_se,
                                  std::fabs(mean_mc - mean_formula), c.k_sigma * mean_se,
                                  "formula " + fmt(mean_formula) + ", Monte Carlo " + fmt(mean_mc)));
    const double var_thr = c.rel_tol * std::fabs(vf.value) + c.k_sigma * mv.stderr_var();
    R.checks.push_back(make_check("minor_variance.variance", std::fabs(vf.value - mv.var) <= var_thr, std::fabs(vf.value - mv.var),
                                  var_thr, "formula " + fmt(vf.value) + ", Monte Carlo " + fmt(mv.var)));
    R.checks.push_back(report_only("minor_variance.verbatim_expression", vf.verbatim,
                                   "expression with unit cross-term coefficient"));
    R.checks.push_back(report_only("minor_variance.tail_estimate", vf.tail_estimate, "|V(D) - V(D/2)|"));
    double msq = 0.0;
    for (double v : Ss) msq += (v - alpha) * (v - alpha);
    msq /= static_cast<double>(Ss.size());
    R.checks.push_back(report_only("minor_variance.mean_square_about_zero", msq, "E[((1/m) int F)^2]"));

    R.data["minor_variance"] = {
        {"N", N}, {"i", i}, {"m", c.m}, {"trials", c.trials}, {"D", D},
        {"x0", eta.x0}, {"x1", eta.x1}, {"slope", eta.slope}, {"alpha", alpha},
        {"literal_endpoint", c.literal_endpoint},
        {"first_moment_formula", mean_formula}, {"first_moment_mc", mean_mc}, {"first_moment_stderr", mean_se},
        {"S1", vf.terms.S1}, {"S2", vf.terms.S2}, {"S3", vf.terms.S3},
        {"variance_formula", vf.value}, {"variance_verbatim", vf.verbatim}, {"variance_half_cutoff", vf.half_cutoff},
        {"variance_mc", mv.var}, {"variance_mc_stderr", mv.stderr_var()},
        {"ajk_gate_change", t.gate_change}, {"ajk_max_disagreement", t.max_disagreement}, {"ajk_max_envelope", t.max_envelope},
    };
    for (int j = t.j0; j <= t.j1; ++j)
        for (int k = std::max(t.k0, N); k <= t.k1; ++k)
            if (k - j <= D) R.rows.push_back({"minor_variance_ajk", N, 0, "a_" + std::to_string(j) + "_" + std::to_string(k), t.at(j, k)});
    for (std::size_t n = 0; n < Ss.size(); ++n) R.rows.push_back({"minor_variance", N, long(n), "S", Ss[n]});
    return R;
}

}  // namespace gml
