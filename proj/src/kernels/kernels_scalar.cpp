#include <cmath>

#include "aircov/kernels/kernels.hpp"

namespace aircov::kernels {

namespace {

void points_in_convex_ring_scalar(const double* xs, const double* ys, std::size_t n,
                                  const double* ring_xs, const double* ring_ys, std::size_t m,
                                  std::uint8_t* out) {
    for (std::size_t k = 0; k < n; ++k) {
        const double px = xs[k], py = ys[k];
        std::uint8_t inside = 1;
        for (std::size_t e = 0; e < m; ++e) {
            const std::size_t f = e + 1 == m ? 0 : e + 1;
            const double ax = ring_xs[e], ay = ring_ys[e];
            const double cross = (ring_xs[f] - ax) * (py - ay) - (ring_ys[f] - ay) * (px - ax);
            if (!(cross >= 0.0)) {
                inside = 0;
                break;
            }
        }
        out[k] = inside;
    }
}

void gaussian_mixture_scalar(const double* xs, const double* ys, std::size_t n,
                             const GaussComponent* comps, std::size_t nc, double* out) {
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double dx = xs[k] - comps[c].cx;
            const double dy = ys[k] - comps[c].cy;
            acc += comps[c].amp * std::exp(-(dx * dx + dy * dy) * comps[c].inv_two_sigma2);
        }
        out[k] = acc;
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
    return acc;
}

} // namespace

const Backend& scalar_backend() {
    static const Backend backend{"scalar", points_in_convex_ring_scalar, gaussian_mixture_scalar,
                                 dot_scalar};
    return backend;
}

} // namespace aircov::kernels
