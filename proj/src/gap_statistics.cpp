#include "gml/gap_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gml/dpp.hpp"
#include "gml/gaudin.hpp"
#include "gml/parallel.hpp"
#include "gml/poisson_binomial.hpp"
#include "gml/quadrature.hpp"
#include "gml/special_functions.hpp"
#include "gml/stats.hpp"

namespace gml {

using json = nlohmann::ordered_json;

namespace {

// stream tags keep the pools of one run independent of each other
enum : std::uint64_t {
    kTagTail = 101,
    kTagMoment = 102,
    kTagWindow = 103,
    kTagUniversality = 201,
    kTagInterlacing = 301,
    kTagProfile = 302,
    kTagHistogram = 401,
    kTagCounting = 501,
    kTagRigidity = 601,
};

int bulk_index(double frac, int N) { return static_cast<int>(std::lround(frac * N)); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

json meanvar_json(const MeanVar& m) {
    return json{{"n", m.n}, {"mean", m.mean}, {"stderr", m.stderr_mean()}, {"var", m.var}, {"var_stderr", m.stderr_var()}};
}

}  // namespace

bool in_bulk(int i, int N, double delta) { return i >= delta * N && i <= (1.0 - delta) * N && i >= 1 && i <= N; }

double gap_scale(int N, int i) { return std::sqrt(0.5 * N) * rho_sc(classical_location(static_cast<double>(i) / N)); }

std::vector<double> normalized_gaps(const std::vector<double>& eig, int i_first, int i_last, double delta) {
    const int N = static_cast<int>(eig.size());
    std::vector<double> g;
    for (int i = i_first; i <= i_last; ++i) {
        if (!in_bulk(i, N, delta) || i + 1 > N) throw std::out_of_range("normalized_gaps: index " + std::to_string(i) + " outside the bulk");
        g.push_back(gap_scale(N, i) * (eig[i] - eig[i - 1]));
    }
    return g;
}

GapSample interlacing_gaps(const MinorChain& chain, int i_first, int i_last, double delta) {
    if (chain.spectra.size() < 2) throw std::invalid_argument("interlacing_gaps: chain needs levels N and N-1");
    const auto& lam = chain.spectra[0].eigenvalues;
    const auto& mnr = chain.spectra[1].eigenvalues;
    if (!interlaces(lam, mnr)) throw std::runtime_error("interlacing_gaps: interlacing violated");
    GapSample s;
    s.N = static_cast<int>(lam.size());
    s.i_first = i_first;
    s.g = normalized_gaps(lam, i_first, i_last, delta);
    for (int i = i_first; i <= i_last; ++i) s.g_tilde.push_back(gap_scale(s.N, i) * (mnr[i - 1] - lam[i - 1]));
    return s;
}

GapSample interlacing_gaps(const TwoRowSample& t, int N, int i_first, int i_last, double delta) {
    GapSample s;
    s.N = N;
    s.i_first = i_first;
    for (int i = i_first; i <= i_last; ++i) {
        if (!in_bulk(i, N, delta)) throw std::out_of_range("interlacing_gaps: index outside the bulk");
        const int k = i - 1 - t.first;
        if (k < 0 || k + 1 >= static_cast<int>(t.top.size())) throw std::out_of_range("interlacing_gaps: sample window too small");
        const double li = t.top[k], li1 = t.top[k + 1], lp = t.minor[i - 1];
        if (!(li < lp && lp < li1)) throw std::runtime_error("interlacing_gaps: interlacing violated");
        const double sc = gap_scale(N, i);
        s.g.push_back(sc * (li1 - li));
        s.g_tilde.push_back(sc * (lp - li));
    }
    return s;
}

long right_count(const std::vector<double>& eig, double x, double t, int N) {
    const double f = bulk_rescale(x, t, N);
    return static_cast<long>(eig.end() - std::lower_bound(eig.begin(), eig.end(), f));
}

long counting_statistic(const std::vector<double>& eig, double x, double t, double h, int N) {
    if (h <= 0.0) return 0;
    const double lo = bulk_rescale(x, t, N), hi = bulk_rescale(x, t + h, N);
    return static_cast<long>(std::lower_bound(eig.begin(), eig.end(), hi) - std::lower_bound(eig.begin(), eig.end(), lo));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> gap_pool(int N, int i, long trials, std::uint64_t seed, std::uint64_t tag) {
    const double sc = gap_scale(N, i);
    return run_trials(trials, seed, tag, [&](long, Philox& rng) {
        const std::vector<double> v = sample_gue_eigenvalues(N, {i - 1, i}, rng);
        return sc * (v[1] - v[0]);
    });
}

}  // namespace

SuiteResult verify_gap_bounds(const GapBoundsConfig& c) {
    SuiteResult R;
    const int N = c.N_primary;
    const int i = bulk_index(c.i_frac, N);
    if (!in_bulk(i, N, c.delta)) throw std::invalid_argument("verify_gap_bounds: index outside bulk");
    if (c.trials_tail < 100 || c.trials_moment < 100 || c.trials_window < 100)
        throw std::invalid_argument("verify_gap_bounds: insufficient trials for the requested confidence");

    // (i) and (iii)
    const std::vector<double> g = gap_pool(N, i, c.trials_tail, c.seed, kTagTail);
    const long n = static_cast<long>(g.size());
    json tail = json::array(), lower = json::array();
    bool ok_i = true, ok_iii = true;
    for (double h : c.tail_h) {
        const long k = std::count_if(g.begin(), g.end(), [&](double x) { return x >= h; });
        const Interval01 w = wilson_interval(k, n);
        const double bound = c.C_tail * std::exp(-h / 4.0);
        ok_i = ok_i && w.hi <= bound;
        tail.push_back({{"h", h}, {"p_hat", double(k) / n}, {"wilson_lo", w.lo}, {"wilson_hi", w.hi}, {"bound", bound}});
    }
    for (double h : c.lower_h) {
        const long k = std::count_if(g.begin(), g.end(), [&](double x) { return x <= h; });
        const Interval01 w = wilson_interval(k, n);
        const double bound = c.C_lower * std::pow(h, 2.0 / 3.0) * std::sqrt(std::log(1.0 / h));
        ok_iii = ok_iii && w.hi <= bound;
        lower.push_back({{"h", h}, {"p_hat", double(k) / n}, {"wilson_lo", w.lo}, {"wilson_hi", w.hi}, {"bound", bound}});
    }
    double worst_i = 0.0, worst_iii = 0.0;
    for (const auto& t : tail) worst_i = std::max(worst_i, t["wilson_hi"].get<double>() / t["bound"].get<double>());
    for (const auto& t : lower) worst_iii = std::max(worst_iii, t["wilson_hi"].get<double>() / t["bound"].get<double>());
    R.checks.push_back(make_check("gap_bounds.i.tail", ok_i, worst_i, 1.0, "max Wilson upper / (C e^{-h/4})"));
    R.checks.push_back(make_check("gap_bounds.iii.lower_tail", ok_iii, worst_iii, 1.0, "max Wilson upper / (C h^{2/3} log^{1/2}(1/h))"));
    R.data["tail"] = tail;
    R.data["lower_tail"] = lower;
    R.data["mean_gap"] = meanvar_json(mean_var(g));

    // (ii)
    json moments = json::object();
    std::vector<double> Ns_d;
    std::vector<std::vector<double>> mom(c.powers.size());
    for (int NN : c.Ns) {
        const int ii = bulk_index(c.i_frac, NN);
        const std::vector<double> gp = gap_pool(NN, ii, c.trials_moment, c.seed, kTagMoment + 1000ull * NN);
        Ns_d.push_back(NN);
        json row = json::object();
        for (std::size_t p = 0; p < c.powers.size(); ++p) {
            std::vector<double> xp(gp.size());
            for (std::size_t t = 0; t < gp.size(); ++t) xp[t] = std::pow(gp[t], c.powers[p]);
            const MeanVar mv = mean_var(xp);
            mom[p].push_back(mv.mean);
            row["p" + std::to_string(c.powers[p])] = json{{"mean", mv.mean}, {"stderr", mv.stderr_mean()}};
        }
        moments[std::to_string(NN)] = row;
    }
    bool ok_ii = true;
    double worst_slope = 0.0;
    json slopes = json::object();
    for (std::size_t p = 0; p < c.powers.size(); ++p) {
        const double s = loglog_slope(Ns_d, mom[p]);
        slopes["p" + std::to_string(c.powers[p])] = s;
        worst_slope = std::max(worst_slope, std::fabs(s));
        ok_ii = ok_ii && std::fabs(s) < c.slope_tol;
    }
    R.checks.push_back(make_check("gap_bounds.ii.moment_flatness", ok_ii, worst_slope, c.slope_tol, "max |slope| of log E g^p vs log N"));
    R.data["moments"] = moments;
    R.data["moment_slopes"] = slopes;

    // (iv)
    int M = c.m_calibrate;
    for (int m : c.m_test) M = std::max(M, m);
    if (!in_bulk(i + M - 1, N, c.delta)) throw std::invalid_argument("verify_gap_bounds: window leaves the bulk");
    std::vector<int> idx(M + 1);
    std::iota(idx.begin(), idx.end(), i - 1);
    std::vector<double> scales(M);
    for (int l = 0; l < M; ++l) scales[l] = gap_scale(N, i + l);
    const auto windows = run_trials(c.trials_window, c.seed, kTagWindow, [&](long, Philox& rng) {
        const std::vector<double> v = sample_gue_eigenvalues(N, idx, rng);
        std::vector<double> gl(M);
        for (int l = 0; l < M; ++l) gl[l] = scales[l] * (v[l + 1] - v[l]);
        return gl;
    });
    std::vector<int> ms{c.m_calibrate};
    ms.insert(ms.end(), c.m_test.begin(), c.m_test.end());
    json win = json::array();
    std::vector<double> var_m;
    for (int m : ms) {
        std::vector<double> S(windows.size()), D2(windows.size());
        for (std::size_t t = 0; t < windows.size(); ++t) {
            CompensatedSum s;
            for (int l = 0; l < m; ++l) s.add(windows[t][l]);
            S[t] = s.value();
            D2[t] = (S[t] - m) * (S[t] - m);
        }
        const MeanVar mv = mean_var(S);
        var_m.push_back(mv.var);
        win.push_back({{"m", m}, {"mean", mv.mean}, {"var", mv.var}, {"var_stderr", mv.stderr_var()}, {"mean_square_about_m", mean_var(D2).mean}});
    }
    const auto lp = [](int m) { return std::pow(std::log(2.0 + m), 7.0 / 3.0); };
    const double C = var_m[0] / lp(c.m_calibrate);
    bool ok_iv = true;
    double worst_iv = 0.0;
    for (std::size_t k = 1; k < ms.size(); ++k) {
        const double r = var_m[k] / (C * lp(ms[k]));
        worst_iv = std::max(worst_iv, r);
        ok_iv = ok_iv && r <= 1.0;
    }
    const int m_big = *std::max_element(c.m_test.begin(), c.m_test.end());
    const double ratio = var_m[std::find(ms.begin() + 1, ms.end(), m_big) - ms.begin()] / var_m[0];
    R.checks.push_back(make_check("gap_bounds.iv.var_ratio", ratio < c.ratio_max, ratio, c.ratio_max,
                                  "Var(m=" + std::to_string(m_big) + ") / Var(m=" + std::to_string(c.m_calibrate) + ")"));
    R.checks.push_back(make_check("gap_bounds.iv.log_power_envelope", ok_iv, worst_iv, 1.0, "max Var(m) / (C log^{7/3}(2+m)), C fitted at m=" + std::to_string(c.m_calibrate)));
    R.data["windows"] = win;
    R.data["calibrated_C"] = C;

    for (std::size_t t = 0; t < std::min<std::size_t>(g.size(), 20000); ++t) R.rows.push_back({"gaps", N, long(t), "g_" + std::to_string(i), g[t]});
    return R;
}

// ---------------------------------------------------------------------------

SuiteResult verify_universality(const UniversalityConfig& c) {
    SuiteResult R;
    const int N = c.N;
    const int i = bulk_index(c.i_frac, N), j = bulk_index(c.j_frac, N);
    if (!in_bulk(i, N, c.delta) || !in_bulk(j, N, c.delta)) throw std::invalid_argument("verify_universality: index outside bulk");
    const int lo = std::min(i, j), hi = std::max(i, j);
    struct Rec {
        double gi, gti, gj, gtj;
        bool interlace_ok;
    };
    const auto recs = run_trials(c.trials, c.seed, kTagUniversality, [&](long, Philox& rng) {
        const TwoRowSample s = sample_two_row(N, lo - 1, hi - lo + 2, rng);
        Rec r{};
        try {
            const GapSample a = interlacing_gaps(s, N, i, i, c.delta), b = interlacing_gaps(s, N, j, j, c.delta);
            r = {a.g[0], a.g_tilde[0], b.g[0], b.g_tilde[0], true};
            r.interlace_ok = 0.0 < r.gti && r.gti < r.gi && 0.0 < r.gtj && r.gtj < r.gj;
        } catch (const std::runtime_error&) {
            r.interlace_ok = false;
        }
        return r;
    });
    const long bad = std::count_if(recs.begin(), recs.end(), [](const Rec& r) { return !r.interlace_ok; });
    R.checks.push_back(make_check("universality.interlacing", bad == 0, double(recs.size() - bad) / recs.size(), 1.0,
                                  "fraction of trials with 0 < g~ < g at both indices"));
    struct Stat {
        const char* name;
        double (*f)(double g, double gt);
    };
    const Stat stats[] = {
        {"g", [](double g, double) { return g; }},
        {"g^2", [](double g, double) { return g * g; }},
        {"g~", [](double, double gt) { return gt; }},
        {"g~^2", [](double, double gt) { return gt * gt; }},
        {"min(g~,2)", [](double, double gt) { return std::min(gt, 2.0); }},
        {"bump(g,g~)", [](double g, double gt) {
             const double r2 = (g - 1.0) * (g - 1.0) + (gt - 0.5) * (gt - 0.5);
             return r2 < 1.0 ? (1.0 - r2) * (1.0 - r2) : 0.0;
         }},
    };
    json js = json::array();
    for (const Stat& s : stats) {
        std::vector<double> a(recs.size()), b(recs.size());
        for (std::size_t t = 0; t < recs.size(); ++t) {
            a[t] = s.f(recs[t].gi, recs[t].gti);
            b[t] = s.f(recs[t].gj, recs[t].gtj);
        }
        const MeanVar ma = mean_var(a), mb = mean_var(b);
        const double diff = std::fabs(ma.mean - mb.mean);
        const double se = std::hypot(ma.stderr_mean(), mb.stderr_mean());
        const double thr = std::max(c.floor, c.k_sigma * se);
        R.checks.push_back(make_check(std::string("universality.") + s.name, diff < thr, diff, thr,
                                      "E at i=" + std::to_string(i) + ": " + fmt(ma.mean) + ", at j=" + std::to_string(j) + ": " + fmt(mb.mean)));
        js.push_back({{"statistic", s.name}, {"mean_i", ma.mean}, {"mean_j", mb.mean}, {"stderr_pooled", se}, {"threshold", thr}});
    }
    // Fixed-energy limit of E g~_i: the two rows are offset by the shift of the
    // classical locations between levels N and N-1, p - gamma rho_sc(gamma) / 2
    // in gap units, which depends on the bulk position p = i/N.
    auto drift = [N](int k) {
        const double p = static_cast<double>(k) / N, g = classical_location(p);
        return p - 0.5 * g * rho_sc(g);
    };
    R.checks.push_back(report_only("universality.g~_limit_difference", std::fabs(drift(i) - drift(j)),
                                   "limit of E g~ is " + fmt(drift(i)) + " at i, " + fmt(drift(j)) + " at j"));
    R.data["universality"] = {{"N", N}, {"i", i}, {"j", j}, {"trials", c.trials}, {"statistics", js},
                              {"g~_limit_i", drift(i)}, {"g~_limit_j", drift(j)}};
    for (std::size_t t = 0; t < recs.size(); ++t) {
        R.rows.push_back({"universality", N, long(t), "g_" + std::to_string(i), recs[t].gi});
        R.rows.push_back({"universality", N, long(t), "gt_" + std::to_string(i), recs[t].gti});
    }
    return R;
}

// ---------------------------------------------------------------------------

SuiteResult verify_interlacing_variance(const InterlacingVarianceConfig& c) {
    SuiteResult R;
    const int N = c.N;
    const int i = bulk_index(c.i_frac, N);
    const int M = *std::max_element(c.ms.begin(), c.ms.end());
    if (!in_bulk(i + 1, N, c.delta) || !in_bulk(i + M, N, c.delta)) throw std::invalid_argument("verify_interlacing_variance: window leaves the bulk");
    std::vector<double> scales(M);
    for (int l = 1; l <= M; ++l) scales[l - 1] = gap_scale(N, i + l);
    // gt[l-1] = g~_{i+l}, l = 1..M
    const auto pools = run_trials(c.trials, c.seed, kTagInterlacing, [&](long, Philox& rng) {
        const TwoRowSample s = sample_two_row(N, i, M, rng);
        std::vector<double> gt(M);
        for (int l = 1; l <= M; ++l) gt[l - 1] = scales[l - 1] * (s.minor[i + l - 1] - s.top[l - 1]);
        return gt;
    });
    auto profile_var = [&](const std::vector<double>& a) {
        std::vector<double> S(pools.size());
        for (std::size_t t = 0; t < pools.size(); ++t) {
            CompensatedSum s;
            for (std::size_t l = 0; l < a.size(); ++l) s.add(a[l] * pools[t][l]);
            S[t] = s.value();
        }
        return mean_var(S);
    };
    std::vector<double> one_var(M);
    for (int l = 0; l < M; ++l) {
        std::vector<double> a(l + 1, 0.0);
        a[l] = 1.0;
        one_var[l] = profile_var(a).var;
    }
    const double max_single = *std::max_element(one_var.begin(), one_var.end());

    json rows = json::array();
    std::vector<double> ms_d, vc;
    double alt_ratio_at = kNaN;
    bool ok_ceiling = true;
    double worst_ceiling = 0.0;
    for (int m : c.ms) {
        std::vector<double> cst(m, 1.0), alt(m), rnd(m);
        for (int l = 0; l < m; ++l) alt[l] = (l % 2 == 0) ? 1.0 : -1.0;
        Philox prng(stream_key(c.seed, static_cast<std::uint64_t>(m), kTagProfile));
        for (int l = 0; l < m; ++l) rnd[l] = prng.uniform() < 0.5 ? -1.0 : 1.0;
        const MeanVar v_c = profile_var(cst), v_a = profile_var(alt), v_r = profile_var(rnd);
        const double mass = m;  // sum |a_l|^2 for unit-modulus profiles
        ms_d.push_back(m);
        vc.push_back(v_c.var);
        const double ceiling = m * mass;
        ok_ceiling = ok_ceiling && v_r.var <= ceiling;
        worst_ceiling = std::max(worst_ceiling, v_r.var / ceiling);
        const double alt_ratio = (v_a.var / mass) / (v_c.var / mass);
        if (m == c.m_compare) alt_ratio_at = alt_ratio;
        rows.push_back({{"m", m},
                        {"var_constant", v_c.var},
                        {"var_constant_stderr", v_c.stderr_var()},
                        {"var_alternating", v_a.var},
                        {"var_random_unit", v_r.var},
                        {"alternating_over_constant", alt_ratio},
                        {"random_over_ceiling", v_r.var / ceiling},
                        {"improvement_factor", (m * mass * max_single) / v_r.var}});
    }
    const double slope = loglog_slope(ms_d, vc);
    R.checks.push_back(make_check("interlacing_variance.constant_slope", slope < c.slope_max, slope, c.slope_max, "log-log slope of Var sum_{l<=m} g~_{i+l}"));
    R.checks.push_back(make_check("interlacing_variance.alternating_ratio", alt_ratio_at < c.alt_ratio_max, alt_ratio_at, c.alt_ratio_max,
                                  "(Var_alt / sum a^2) / (Var_const / sum a^2) at m=" + std::to_string(c.m_compare)));
    R.checks.push_back(make_check("interlacing_variance.random_ceiling", ok_ceiling, worst_ceiling, 1.0, "max Var / (m sum |a_l|^2), random signs"));
    R.checks.push_back(report_only("interlacing_variance.single_gap_var", one_var[0], "Var g~_{i+1} (m=1)"));
    R.data["interlacing_variance"] = {{"N", N}, {"i", i}, {"trials", c.trials}, {"max_single_var", max_single}, {"profiles", rows}};
    return R;
}

// ---------------------------------------------------------------------------

SuiteResult gap_histogram(const GapHistogramConfig& c) {
    SuiteResult R;
    const int i = c.N / 2;
    const std::vector<double> g = gap_pool(c.N, i, c.trials, c.seed, kTagHistogram);
    std::vector<double> in;
    for (double x : g)
        if (x >= c.lo && x < c.hi) in.push_back(x);
    const Histogram h = histogram(in, c.lo, c.hi, c.bins);
    double sup = 0.0, integral = 0.0;
    json bins = json::array();
    for (int b = 0; b < c.bins; ++b) {
        const double a = c.lo + b * h.width(), e = a + h.width();
        const double emp = h.density(b), th = gaudin_bin_average(a, e);
        integral += emp * h.width();
        sup = std::max(sup, std::fabs(emp - th));
        bins.push_back({{"lo", a}, {"hi", e}, {"empirical", emp}, {"gaudin", th}});
    }
    R.checks.push_back(make_check("gaudin.histogram_sup", sup < c.sup_tol, sup, c.sup_tol, "sup over bins of |empirical - p| (bin averages)"));
    R.checks.push_back(make_check("gaudin.histogram_integral", std::fabs(integral - 1.0) < 1e-12, integral, 1.0));

    const QuadratureRule r = composite_gauss_legendre({0.0, 8.0}, 16, 1.0);
    double ip = 0.0, iyp = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double p = gaudin_density(r.x[k]);
        ip += r.w[k] * p;
        iyp += r.w[k] * r.x[k] * p;
    }
    R.checks.push_back(make_check("gaudin.normalization", std::fabs(ip - 1.0) < 1e-4, ip, 1.0, "int_0^8 p"));
    R.checks.push_back(make_check("gaudin.mean_quadrature", std::fabs(iyp - 1.0) < 1e-3, iyp, 1.0, "int_0^8 y p(y) dy"));
    const MeanVar mv = mean_var(g);
    R.checks.push_back(make_check("gaudin.mean_monte_carlo", std::fabs(mv.mean - 1.0) < c.mean_tol, mv.mean, 1.0,
                                  "stderr " + fmt(mv.stderr_mean()) + ", tol " + fmt(c.mean_tol)));
    R.data["gaudin_histogram"] = {{"N", c.N}, {"i", i}, {"trials", c.trials}, {"outside_range", long(g.size() - in.size())}, {"bins", bins}};
    for (std::size_t t = 0; t < g.size(); ++t) R.rows.push_back({"gaudin-compare", c.N, long(t), "g_" + std::to_string(i), g[t]});
    return R;
}

// ---------------------------------------------------------------------------

SuiteResult verify_counting_law(const CountingCompareConfig& c) {
    SuiteResult R;
    const double a = bulk_rescale(c.x, 0.0, c.N), b = bulk_rescale(c.x, c.h, c.N);
    const std::vector<double> mu = projection_occupations(c.N, a, b);
    const std::vector<double> pmf = pb_exact_pmf(PoissonBinomial{mu});
    const auto counts = run_trials(c.trials, c.seed, kTagCounting, [&](long, Philox& rng) {
        const Tridiagonal t = sample_gue_tridiagonal(c.N, rng);
        return static_cast<long>(sturm_count(t, b) - sturm_count(t, a));
    });
    std::vector<double> emp(pmf.size(), 0.0);
    long overflow = 0;
    for (long k : counts) {
        if (k < static_cast<long>(emp.size()))
            emp[k] += 1.0 / counts.size();
        else
            ++overflow;
    }
    const double tv = total_variation(emp, pmf) + 0.5 * double(overflow) / counts.size();
    R.checks.push_back(make_check("counting.gue_vs_poisson_binomial", tv < c.tv_tol, tv, c.tv_tol, "TV distance of N_{x,0,h} law"));
    std::vector<double> cd(counts.size());
    for (std::size_t t = 0; t < counts.size(); ++t) cd[t] = double(counts[t]);
    const MeanVar mv = mean_var(cd);
    double smu = 0.0, smu1 = 0.0;
    for (double m : mu) {
        smu += m;
        smu1 += m * (1.0 - m);
    }
    R.data["counting"] = {{"N", c.N}, {"x", c.x}, {"h", c.h}, {"interval", {a, b}}, {"mc_mean", mv.mean}, {"mc_var", mv.var},
                          {"kernel_mean", smu}, {"kernel_var", smu1}, {"pmf_exact", std::vector<double>(pmf.begin(), pmf.begin() + std::min<std::size_t>(pmf.size(), 12))},
                          {"pmf_empirical", std::vector<double>(emp.begin(), emp.begin() + std::min<std::size_t>(emp.size(), 12))}};
    return R;
}

// ---------------------------------------------------------------------------

SuiteResult verify_rigidity(const RigidityConfig& c) {
    SuiteResult R;
    const int N = c.N;
    std::vector<int> idx;
    for (double f : c.i_fracs) idx.push_back(bulk_index(f, N) - 1);
    const auto vals = run_trials(c.trials, c.seed, kTagRigidity, [&](long, Philox& rng) { return sample_gue_eigenvalues(N, idx, rng); });
    const double width = c.width_factor * std::log(double(N)) / std::sqrt(double(N));
    json js = json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const int i = idx[k] + 1;
        const double gam = classical_location(double(i) / N);
        const double centre = std::sqrt(2.0 * N) * gam;
        long out = 0;
        std::vector<double> z(vals.size());
        const double sd = std::sqrt(std::log(double(N)) / (4.0 * (1.0 - gam * gam) * N));
        for (std::size_t t = 0; t < vals.size(); ++t) {
            if (std::fabs(vals[t][k] - centre) > width) ++out;
            z[t] = (vals[t][k] - centre) / sd;
        }
        const double frac = double(out) / vals.size();
        worst = std::max(worst, frac);
        js.push_back({{"i", i}, {"fraction_outside", frac}, {"ks_gaussian", ks_statistic(z, normal_cdf)}, {"studentized_var", mean_var(z).var}});
    }
    R.checks.push_back(make_check("rigidity.fraction_outside", worst < c.max_fraction, worst, c.max_fraction,
                                  "|lambda_i - sqrt(2N) gamma| > " + fmt(c.width_factor) + " log N / sqrt N"));
    R.data["rigidity"] = {{"N", N}, {"trials", c.trials}, {"width", width}, {"indices", js}};
    return R;
}

}  // namespace gml
