#include "aircov/kernels/kernels.hpp"

namespace aircov::kernels {

#if defined(AIRCOV_HAVE_AVX2_TU)
const Backend* avx2_backend_impl(); // kernels_avx2.cpp
#else
static const Backend* avx2_backend_impl() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Backend* g_forced = nullptr;

} // namespace

const Backend* avx2_backend() { return cpu_has_avx2() ? avx2_backend_impl() : nullptr; }

const Backend& active_backend() {
    if (g_forced) return *g_forced;
    const Backend* avx2 = avx2_backend();
    return avx2 ? *avx2 : scalar_backend();
}

void set_backend_for_tests(const Backend* b) { g_forced = b; }

} // namespace aircov::kernels
