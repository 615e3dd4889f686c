#pragma once

#include <cstddef>
#include <cstdint>

namespace aircov::kernels {

/// One term of a Gaussian-mixture density, pre-baked for evaluation:
/// contribution = amp · exp(−(‖q − c‖²) · inv_two_sigma2).
struct GaussComponent {
    double cx = 0.0, cy = 0.0;
    double inv_two_sigma2 = 0.0; // 1/(2σ²)
    double amp = 0.0;            // w/(2πσ²)
};

/// Batch kernels with interchangeable implementations.  The scalar backend is
/// the reference; the AVX2 backend must agree with it (masks bit-identical,
/// sums to floating-point reassociation tolerance).
struct Backend {
    const char* name;

    /// out[k] = 1 iff (xs[k], ys[k]) is inside-or-on the convex CCW ring
    /// (all edge cross products ≥ 0), else 0.
    void (*points_in_convex_ring)(const double* xs, const double* ys, std::size_t n,
                                  const double* ring_xs, const double* ring_ys, std::size_t m,
                                  std::uint8_t* out);

    /// out[k] = Σ_c amp_c · exp(−((x−cx)² + (y−cy)²) · inv_two_sigma2_c).
    void (*gaussian_mixture)(const double* xs, const double* ys, std::size_t n,
                             const GaussComponent* comps, std::size_t nc, double* out);

    /// Σ_k a[k]·b[k].
    double (*dot)(const double* a, const double* b, std::size_t n);
};

const Backend& scalar_backend();

/// AVX2 implementation, or nullptr when the build or the CPU lacks support.
const Backend* avx2_backend();

/// The backend in use: AVX2 when available at build time and run time,
/// otherwise scalar.  Overridable for tests via set_backend_for_tests.
const Backend& active_backend();

/// Force a specific backend (nullptr restores automatic selection).
void set_backend_for_tests(const Backend* b);

} // namespace aircov::kernels
