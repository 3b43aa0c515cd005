#pragma once
#include <functional>
#include <vector>

namespace gml {

struct QuadratureRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// n-point Gauss-Legendre on [a,b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre: `per_panel` nodes on each panel, panels split at
// the given breakpoints and further subdivided so no panel exceeds max_len.
QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int per_panel, double max_len);

// Panels that widen geometrically away from `a` (ratio r) up to `b`; used for
// far tails where the integrand decays smoothly.
QuadratureRule graded_gauss_legendre(double a, double b, double first_len, double ratio, int per_panel);

// Gauss-Hermite rule for the weight e^{-x^2}.  scaled_w[i] = w[i] e^{x_i^2}
// (Christoffel form, never underflows), so sum scaled_w[i] f(x_i) ~ int f when
// f = polynomial * e^{-x^2}.
struct HermiteRule {
    std::vector<double> x;
    std::vector<double> w;
    std::vector<double> scaled_w;
};
HermiteRule gauss_hermite(int n);

double integrate(const QuadratureRule& r, const std::function<double(double)>& f);

// Adaptive Gauss-Legendre (7 vs 14 nodes per interval) to absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          int max_depth = 40);

}  // namespace gml
