#include "gml/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gml/linalg.hpp"
#include "gml/special_functions.hpp"

namespace gml {

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    QuadratureRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = mid - half * z;
        r.x[n - 1 - i] = mid + half * z;
        r.w[i] = r.w[n - 1 - i] = half * w;
    }
    return r;
}

namespace {
void append_panel(QuadratureRule& out, const QuadratureRule& ref, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        out.x.push_back(mid + half * ref.x[i]);
        out.w.push_back(half * ref.w[i]);
    }
}
}  // namespace

QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel, double max_len) {
    if (breaks.size() < 2) throw std::invalid_argument("composite_gauss_legendre: need two breakpoints");
    const QuadratureRule ref = gauss_legendre(per_panel);
    QuadratureRule out;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double a = breaks[s], b = breaks[s + 1];
        if (!(b > a)) continue;
        const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_len - 1e-12)));
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) append_panel(out, ref, a + p * h, p + 1 == panels ? b : a + (p + 1) * h);
    }
    return out;
}

QuadratureRule graded_gauss_legendre(double a, double b, double first_len, double ratio, int per_panel) {
    const QuadratureRule ref = gauss_legendre(per_panel);
    QuadratureRule out;
    const double dir = b >= a ? 1.0 : -1.0;
    double pos = a, len = first_len;
    while (dir * (b - pos) > 0.0) {
        double next = pos + dir * len;
        if (dir * (next - b) > 0.0 || dir * (b - next) < 0.5 * len) next = b;
        append_panel(out, ref, std::min(pos, next), std::max(pos, next));
        pos = next;
        len *= ratio;
    }
    return out;
}

HermiteRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n < 1");
    Tridiagonal t;
    t.d.assign(n, 0.0);
    t.e.resize(n - 1);
    for (int k = 0; k + 1 < n; ++k) t.e[k] = std::sqrt(0.5 * (k + 1));
    HermiteRule r;
    r.x = tridiagonal_eigenvalues(t);
    r.w.resize(n);
    r.scaled_w.resize(n);
    std::vector<double> phi(n + 1);
    for (int i = 0; i < n; ++i) {
        double x = r.x[i];
        for (int it = 0; it < 3; ++it) {
            const OscillatorTriple o = oscillator_triple(n - 1, x);
            const double d = std::sqrt(2.0 * n) * o.cur - x * o.next;
            if (d == 0.0) break;
            x -= o.next / d;
        }
        if (2 * i + 1 == n) x = 0.0;
        r.x[i] = x;
        oscillator_values(n - 1, x, phi.data());
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += phi[k] * phi[k];
        r.scaled_w[i] = 1.0 / s;
        r.w[i] = r.scaled_w[i] * std::exp(-x * x);
    }
    // enforce exact symmetry of the rule
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (r.x[n - 1 - i] - r.x[i]);
        const double ws = 0.5 * (r.scaled_w[i] + r.scaled_w[n - 1 - i]);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.scaled_w[i] = r.scaled_w[n - 1 - i] = ws;
        r.w[i] = r.w[n - 1 - i] = ws * std::exp(-x * x);
    }
    return r;
}

double integrate(const QuadratureRule& r, const std::function<double(double)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i]);
    return s;
}

namespace {
const QuadratureRule& gl_ref(int n) {
    static const QuadratureRule g7 = gauss_legendre(7);
    static const QuadratureRule g15 = gauss_legendre(15);
    return n == 7 ? g7 : g15;
}

double apply_ref(const QuadratureRule& ref, const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) s += ref.w[i] * f(mid + half * ref.x[i]);
    return half * s;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
    const double lo = apply_ref(gl_ref(7), f, a, b);
    const double hi = apply_ref(gl_ref(15), f, a, b);
    if (std::fabs(hi - lo) <= tol || depth <= 0) return hi;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1);
}
}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return adapt(f, a, b, abs_tol, max_depth);
}

}  // namespace gml
