#pragma once
#include <cstddef>
#include <vector>

namespace gml {

// Every hot kernel has a serial reference and an OpenMP version that must
// produce bit-identical results; Exec selects between them.
enum class Exec { serial, parallel };

int max_workers();
void set_workers(int w);

// Neumaier-compensated sum, accumulated in index order.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (abs_(sum_) >= abs_(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    static double abs_(double v) { return v < 0 ? -v : v; }
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_sum(const std::vector<double>& v);

}  // namespace gml

#include <exception>
#include <mutex>
#include <type_traits>

#include "gml/rng.hpp"

namespace gml {

// Runs f(trial, rng) for trial = 0..n-1 with rng keyed by (seed, trial, tag).
// Results land in trial order whatever the schedule, so any reduction over
// the returned vector is independent of the worker count.
template <class F>
auto run_trials(long n, std::uint64_t seed, std::uint64_t tag, F&& f, Exec ex = Exec::parallel)
    -> std::vector<std::invoke_result_t<F&, long, Philox&>> {
    using R = std::invoke_result_t<F&, long, Philox&>;
    std::vector<R> out(static_cast<std::size_t>(n));
    std::exception_ptr err;
    std::mutex err_mu;
#pragma omp parallel for schedule(dynamic, 8) if (ex == Exec::parallel)
    for (long t = 0; t < n; ++t) {
        try {
            Philox rng(stream_key(seed, static_cast<std::uint64_t>(t), tag));
            out[static_cast<std::size_t>(t)] = f(t, rng);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return out;
}

}  // namespace gml
