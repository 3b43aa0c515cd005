#pragma once
#include <vector>

namespace gml {

struct FredholmEvaluation {
    double y = 0.0;
    int order = 0;
    double E = 1.0;  // det(1 - K_sine) on L^2([0,y])
    std::vector<double> mu;
    double gate_change = 0.0;  // |E(q) - E(2q)|
};

int default_fredholm_order(double y);

// Throws std::runtime_error if doubling the order moves E by more than gate_tol.
FredholmEvaluation fredholm_evaluate(double y, int q = 0, bool gate = true, double gate_tol = 1e-10);

// E(y), memoized; concurrent calls are safe.
double fredholm_det(double y, int q = 0);

// dE/dy by central differences on the memoized determinant.
double fredholm_det_derivative(double y);

// Gaudin gap density p(y) = E''(y), clamped at 0.
double gaudin_density(double y);

// P(gap >= u) = -E'(u).
double gaudin_survival(double u);

// Mean of p over [a,b] from E' differences (exact up to the derivative error).
double gaudin_bin_average(double a, double b);

void clear_fredholm_cache();
std::size_t fredholm_cache_size();

}  // namespace gml
