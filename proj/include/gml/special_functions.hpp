#pragma once
#include <cmath>
#include <vector>

namespace gml {

// Values of the Hermite oscillator functions phi_0..phi_nmax at one abscissa.
// h_values[n] is phi_n(x) * exp(x^2/2) and only meaningful where h_available[n].
struct HermiteTable {
    int max_degree = 0;
    double x = 0.0;
    std::vector<double> values;
    std::vector<double> h_values;
    std::vector<char> h_available;
};

HermiteTable eval_oscillator(int n_max, double x);

// Allocation-free variant: out must hold n_max+1 values.
void oscillator_values(int n_max, double x, double* out);

// phi_{n-1}(x), phi_n(x), phi_{n+1}(x) in one pass (phi_{-1} = 0).
struct OscillatorTriple {
    double prev, cur, next;
};
OscillatorTriple oscillator_triple(int n, double x);

// phi_n'(x) from the lowering identity phi_n' = sqrt(2n) phi_{n-1} - x phi_n.
inline double oscillator_derivative(int n, double x, double phi_nm1, double phi_n) {
    return std::sqrt(2.0 * n) * phi_nm1 - x * phi_n;
}

double rho_sc(double x);
double semicircle_cdf(double x);
double classical_location(double p);

// f_x(t) = sqrt(2N)(x + t/(N rho_sc(x))) and its inverse in t.
double bulk_rescale(double x, double t, int N);
double bulk_rescale_inverse(double x, double u, int N);

}  // namespace gml
