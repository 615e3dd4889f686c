// AVX2 variants of the batch kernels.  Compiled with -mavx2 (see CMake); the
// arithmetic mirrors the scalar backend operation-for-operation so that the
// convex-ring masks come out bit-identical (no FMA contraction).

#if defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

#include "aircov/kernels/kernels.hpp"

namespace aircov::kernels {

namespace {

void points_in_convex_ring_avx2(const double* xs, const double* ys, std::size_t n,
                                const double* ring_xs, const double* ring_ys, std::size_t m,
                                std::uint8_t* out) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d px = _mm256_loadu_pd(xs + k);
        const __m256d py = _mm256_loadu_pd(ys + k);
        __m256d inside = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
        for (std::size_t e = 0; e < m; ++e) {
            const std::size_t f = e + 1 == m ? 0 : e + 1;
            const __m256d ax = _mm256_set1_pd(ring_xs[e]);
            const __m256d ay = _mm256_set1_pd(ring_ys[e]);
            const __m256d ex = _mm256_set1_pd(ring_xs[f] - ring_xs[e]);
            const __m256d ey = _mm256_set1_pd(ring_ys[f] - ring_ys[e]);
            const __m256d cross = _mm256_sub_pd(_mm256_mul_pd(ex, _mm256_sub_pd(py, ay)),
                                                _mm256_mul_pd(ey, _mm256_sub_pd(px, ax)));
            inside = _mm256_and_pd(inside, _mm256_cmp_pd(cross, zero, _CMP_GE_OQ));
            if (_mm256_movemask_pd(inside) == 0) break;
        }
        const int mask = _mm256_movemask_pd(inside);
        out[k + 0] = (mask >> 0) & 1;
        out[k + 1] = (mask >> 1) & 1;
        out[k + 2] = (mask >> 2) & 1;
        out[k + 3] = (mask >> 3) & 1;
    }
    if (k < n) {
        scalar_backend().points_in_convex_ring(xs + k, ys + k, n - k, ring_xs, ring_ys, m, out + k);
    }
}

// exp for 4 doubles, Cody-Waite reduction + Cephes rational approximation
// (~1 ulp on the reduced interval).  Inputs far below the underflow threshold
// flush to 0 like std::exp.
__m256d exp_pd(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125E-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212E-6);
    const __m256d max_x = _mm256_set1_pd(709.437);
    const __m256d min_x = _mm256_set1_pd(-708.396);

    const __m256d too_small = _mm256_cmp_pd(x, min_x, _CMP_LT_OQ);
    x = _mm256_min_pd(x, max_x);
    x = _mm256_max_pd(x, min_x);

    // n = round(x / ln 2)
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    // r = x − n·ln2, split for accuracy
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, c1));
    r = _mm256_sub_pd(r, _mm256_mul_pd(n, c2));

    const __m256d p0 = _mm256_set1_pd(1.26177193074810590878E-4);
    const __m256d p1 = _mm256_set1_pd(3.02994407707441961300E-2);
    const __m256d p2 = _mm256_set1_pd(9.99999999999999999910E-1);
    const __m256d q0 = _mm256_set1_pd(3.00198505138664455042E-6);
    const __m256d q1 = _mm256_set1_pd(2.52448340349684104192E-3);
    const __m256d q2 = _mm256_set1_pd(2.27265548208155028766E-1);
    const __m256d q3 = _mm256_set1_pd(2.00000000000000000005E0);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d px = _mm256_add_pd(_mm256_mul_pd(p0, rr), p1);
    px = _mm256_add_pd(_mm256_mul_pd(px, rr), p2);
    px = _mm256_mul_pd(px, r);
    __m256d qx = _mm256_add_pd(_mm256_mul_pd(q0, rr), q1);
    qx = _mm256_add_pd(_mm256_mul_pd(qx, rr), q2);
    qx = _mm256_add_pd(_mm256_mul_pd(qx, rr), q3);

    const __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
    __m256d res = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_add_pd(e, e));

    // res *= 2^n via exponent bits
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i pow2 =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    res = _mm256_mul_pd(res, _mm256_castsi256_pd(pow2));

    return _mm256_andnot_pd(too_small, res);
}

void gaussian_mixture_avx2(const double* xs, const double* ys, std::size_t n,
                           const GaussComponent* comps, std::size_t nc, double* out) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d px = _mm256_loadu_pd(xs + k);
        const __m256d py = _mm256_loadu_pd(ys + k);
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t c = 0; c < nc; ++c) {
            const __m256d dx = _mm256_sub_pd(px, _mm256_set1_pd(comps[c].cx));
            const __m256d dy = _mm256_sub_pd(py, _mm256_set1_pd(comps[c].cy));
            const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            const __m256d arg =
                _mm256_mul_pd(d2, _mm256_set1_pd(-comps[c].inv_two_sigma2));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(comps[c].amp), exp_pd(arg)));
        }
        _mm256_storeu_pd(out + k, acc);
    }
    if (k < n) {
        scalar_backend().gaussian_mixture(xs + k, ys + k, n - k, comps, nc, out + k);
    }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; k < n; ++k) sum += a[k] * b[k];
    return sum;
}

} // namespace

const Backend* avx2_backend_impl() {
    static const Backend backend{"avx2", points_in_convex_ring_avx2, gaussian_mixture_avx2,
                                 dot_avx2};
    return &backend;
}

} // namespace aircov::kernels

#endif // __AVX2__
