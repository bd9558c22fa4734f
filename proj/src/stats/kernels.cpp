#include "specgame/stats/kernels.hpp"

#include <cstdlib>

namespace specgame::stats {

#if defined(SPECGAME_HAVE_AVX2)
const Kernels& avx2_kernels();  // defined in kernels_avx2.cpp
#endif

bool avx2_available() {
#if defined(SPECGAME_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

struct Active {
    const Kernels* kernels;
    const char* name;
};

Active detect() {
    if (const char* force = std::getenv("SPECGAME_FORCE_SCALAR");
        force != nullptr && force[0] == '1')
        return {&scalar_kernels(), "scalar"};
#if defined(SPECGAME_HAVE_AVX2)
    if (avx2_available()) return {&avx2_kernels(), "avx2"};
#endif
    return {&scalar_kernels(), "scalar"};
}

Active& active() {
    static Active state = detect();
    return state;
}

} // namespace

const Kernels& active_kernels() { return *active().kernels; }

const char* backend_name() { return active().name; }

bool force_backend(Backend backend) {
    switch (backend) {
        case Backend::auto_detect:
            active() = detect();
            return true;
        case Backend::scalar:
            active() = {&scalar_kernels(), "scalar"};
            return true;
        case Backend::avx2:
#if defined(SPECGAME_HAVE_AVX2)
            if (avx2_available()) {
                active() = {&avx2_kernels(), "avx2"};
                return true;
            }
#endif
            return false;
    }
    return false;
}

} // namespace specgame::stats
