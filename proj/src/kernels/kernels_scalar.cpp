#include <cmath>

#include "mtlab/kernels.hpp"

namespace mtlab::kernels::scalar {

namespace {

// sin/cos of 2*pi*t. Reducing t modulo 1 first keeps full precision for the
// large arguments produced by q . p with |p| up to the ball radius; the
// reduction is exact in double for |t| < 2^52 and the remaining call sees an
// argument in [-pi, pi].
inline void sincos_2pi(double t, double& s, double& c) {
    const double r = t - std::nearbyint(t);
    const double x = kTwoPi * r;
    s = std::sin(x);
    c = std::cos(x);
}

}  // namespace

Cplx phase_sum(const double* px, const double* py, const double* pz, const double* w,
               std::size_t n, Vec3 q) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = q.x * px[k] + q.y * py[k] + q.z * pz[k];
        double s, c;
        sincos_2pi(t, s, c);
        re += w[k] * c;
        im += w[k] * s;
    }
    return {re, im};
}

Cplx phase_sum_cplx(const double* px, const double* py, const double* pz, const double* ar,
                    const double* ai, std::size_t n, Vec3 q) {
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = q.x * px[k] + q.y * py[k] + q.z * pz[k];
        double s, c;
        sincos_2pi(t, s, c);
        re += ar[k] * c - ai[k] * s;
        im += ar[k] * s + ai[k] * c;
    }
    return {re, im};
}

double tube_mass(const double* px, const double* py, const double* pz, const double* w,
                 std::size_t n, Vec3 anchor, Vec3 dir, double rad2) {
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = px[k] - anchor.x;
        const double dy = py[k] - anchor.y;
        const double dz = pz[k] - anchor.z;
        const double along = dx * dir.x + dy * dir.y + dz * dir.z;
        const double d2 = dx * dx + dy * dy + dz * dz - along * along;
        if (d2 <= rad2) total += w[k];
    }
    return total;
}

}  // namespace mtlab::kernels::scalar
