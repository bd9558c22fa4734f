#pragma once

#include <cstddef>

// Reduction kernels behind the statistics suite. Scalar reference
// implementations always exist; an AVX2 variant is selected at runtime when
// the CPU supports it. The two backends compute the same sums with different
// accumulation orders, so results agree to rounding, not bit-for-bit; the
// equivalence tests pin the tolerance.

namespace specgame::stats {

struct Kernels {
    // sum of x[0..n)
    double (*sum)(const double* x, std::size_t n);
    // sum of (x[i] - mean)^2
    double (*sum_sq_dev)(const double* x, std::size_t n, double mean);
    // sum of a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sums of (x[i] - mean)^2 and (x[i] - mean)^4
    void (*central_moments_2_4)(const double* x, std::size_t n, double mean,
                                double* m2_sum, double* m4_sum);
    // sum of p[i + tau] - p[i] for i in [0, n - tau)
    double (*lagged_diff_sum)(const double* p, std::size_t n, std::size_t tau);
    // sum of ((p[i + tau] - p[i]) - mean)^2 for i in [0, n - tau)
    double (*lagged_diff_sq_dev)(const double* p, std::size_t n, std::size_t tau, double mean);
};

enum class Backend { auto_detect, scalar, avx2 };

// Active kernel set. First call detects the CPU; SPECGAME_FORCE_SCALAR=1 in
// the environment pins the scalar backend.
const Kernels& active_kernels();
const char* backend_name();

// Test hook. Not thread-safe against concurrent kernel users; call before
// spinning up workers. Returns false if the requested backend is unavailable.
bool force_backend(Backend backend);

const Kernels& scalar_kernels();
bool avx2_available();

} // namespace specgame::stats
