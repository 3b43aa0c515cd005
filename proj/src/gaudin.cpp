#include "gml/gaudin.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <utility>

#include "gml/dpp.hpp"

namespace gml {

namespace {

constexpr double kStep = 1e-3;

struct Cache {
    std::shared_mutex mu;
    std::map<std::pair<std::uint64_t, int>, double> table;
};

Cache& cache() {
    static Cache c;
    return c;
}

double det_from_mu(const std::vector<double>& mu) {
    double e = 1.0;
    for (double m : mu) e *= 1.0 - m;
    return e;
}

double raw_det(double y, int q) {
    if (y == 0.0) return 1.0;
    NystromOptions opt;
    opt.convergence_gate = false;
    return det_from_mu(nystrom_restrict(KernelSpec::sine(), 0.0, y, q, opt).mu);
}

// One node count for the whole stencil, so the difference never mixes orders.
double second_difference(double y, double h) {
    const int q = default_fredholm_order(y + kStep);
    return (fredholm_det(y + h, q) - 2.0 * fredholm_det(y, q) + fredholm_det(y - h, q)) / (h * h);
}

double first_difference(double y, double h) {
    const int q = default_fredholm_order(y + kStep);
    return (fredholm_det(y + h, q) - fredholm_det(y - h, q)) / (2.0 * h);
}

}  // namespace

int default_fredholm_order(double y) { return 16 * static_cast<int>(std::ceil(std::max(y, 0.0))) + 32; }

FredholmEvaluation fredholm_evaluate(double y, int q, bool gate, double gate_tol) {
    if (!(y >= 0.0)) throw std::invalid_argument("fredholm_evaluate: y < 0");
    FredholmEvaluation ev;
    ev.y = y;
    ev.order = q > 0 ? q : default_fredholm_order(y);
    if (y == 0.0) return ev;
    NystromOptions opt;
    opt.convergence_gate = false;
    RestrictedKernel rk = nystrom_restrict(KernelSpec::sine(), 0.0, y, ev.order, opt);
    ev.mu = rk.mu;
    ev.order = static_cast<int>(rk.nodes());
    ev.E = det_from_mu(ev.mu);
    if (gate) {
        ev.gate_change = std::fabs(ev.E - raw_det(y, 2 * ev.order));
        if (ev.gate_change > gate_tol) throw std::runtime_error("fredholm_evaluate: convergence gate failed");
    }
    return ev;
}

double fredholm_det(double y, int q) {
    if (!(y >= 0.0)) throw std::invalid_argument("fredholm_det: y < 0");
    if (y == 0.0) return 1.0;
    const int order = q > 0 ? q : default_fredholm_order(y);
    const auto key = std::make_pair(std::bit_cast<std::uint64_t>(y), order);
    Cache& c = cache();
    {
        std::shared_lock lock(c.mu);
        auto it = c.table.find(key);
        if (it != c.table.end()) return it->second;
    }
    const double e = raw_det(y, order);
    std::unique_lock lock(c.mu);
    c.table.emplace(key, e);
    return e;
}

double fredholm_det_derivative(double y) {
    const double h = std::min(kStep, 0.5 * y);
    if (!(h > 0.0)) return -1.0;  // E(y) = 1 - y + O(y^4)
    return (4.0 * first_difference(y, 0.5 * h) - first_difference(y, h)) / 3.0;
}

double gaudin_density(double y) {
    if (!(y > 0.0)) throw std::invalid_argument("gaudin_density: y must be > 0");
    const double h = std::min(kStep, 0.5 * y);
    const double p = (4.0 * second_difference(y, 0.5 * h) - second_difference(y, h)) / 3.0;
    return std::max(p, 0.0);
}

double gaudin_survival(double u) {
    if (u <= 0.0) return 1.0;
    return -fredholm_det_derivative(u);
}

double gaudin_bin_average(double a, double b) {
    if (!(b > a)) throw std::invalid_argument("gaudin_bin_average: empty bin");
    return (gaudin_survival(a) - gaudin_survival(b)) / (b - a);
}

void clear_fredholm_cache() {
    Cache& c = cache();
    std::unique_lock lock(c.mu);
    c.table.clear();
}

std::size_t fredholm_cache_size() {
    Cache& c = cache();
    std::shared_lock lock(c.mu);
    return c.table.size();
}

}  // namespace gml
