#include "specgame/stats/kernels.hpp"

// Reference kernels: straight loops, one accumulator, in index order. These
// define the semantics the vector variants are tested against.

namespace specgame::stats {

namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void central_moments_2_4_scalar(const double* x, std::size_t n, double mean,
                                double* m2_sum, double* m4_sum) {
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        const double d2 = d * d;
        s2 += d2;
        s4 += d2 * d2;
    }
    *m2_sum = s2;
    *m4_sum = s4;
}

double lagged_diff_sum_scalar(const double* p, std::size_t n, std::size_t tau) {
    double s = 0.0;
    for (std::size_t i = 0; i + tau < n; ++i) s += p[i + tau] - p[i];
    return s;
}

double lagged_diff_sq_dev_scalar(const double* p, std::size_t n, std::size_t tau, double mean) {
    double s = 0.0;
    for (std::size_t i = 0; i + tau < n; ++i) {
        const double d = (p[i + tau] - p[i]) - mean;
        s += d * d;
    }
    return s;
}

} // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{sum_scalar,
                           sum_sq_dev_scalar,
                           dot_scalar,
                           central_moments_2_4_scalar,
                           lagged_diff_sum_scalar,
                           lagged_diff_sq_dev_scalar};
    return k;
}

} // namespace specgame::stats
