#include "gml/parallel.hpp"

#include <omp.h>

namespace gml {

int max_workers() { return omp_get_max_threads(); }
void set_workers(int w) {
    if (w > 0) omp_set_num_threads(w);
}

double compensated_sum(const std::vector<double>& v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value();
}

}  // namespace gml
