#pragma once

#include <cstddef>
#include <string>

#include "mtlab/geometry.hpp"

namespace mtlab::kernels {

// The arithmetic inner loops of the library: phase sums over point sets and
// tube membership counts. Each kernel has a scalar reference implementation
// and, on x86-64 with AVX2+FMA, a vectorized variant; the active variant is
// chosen at runtime and the two are equivalence-tested against each other.
//
// All phases are expressed in cycles: exp(2*pi*i*t) with t = q . p. Arguments
// are reduced modulo 1 before evaluation, so |t| may reach ~2^30 without
// precision loss beyond that of the input product itself.

struct Cplx {
    double re = 0.0;
    double im = 0.0;
};

// sum_k w[k] * exp(2*pi*i * (q . p_k)) over SoA points (px, py, pz).
Cplx phase_sum(const double* px, const double* py, const double* pz, const double* w,
               std::size_t n, Vec3 q);

// sum_k (ar[k] + i*ai[k]) * exp(2*pi*i * (q . p_k)).
Cplx phase_sum_cplx(const double* px, const double* py, const double* pz, const double* ar,
                    const double* ai, std::size_t n, Vec3 q);

// sum_k w[k] * [ dist(p_k, line through `anchor` with unit direction `dir`)^2 <= rad2 ].
double tube_mass(const double* px, const double* py, const double* pz, const double* w,
                 std::size_t n, Vec3 anchor, Vec3 dir, double rad2);

enum class Isa { scalar, avx2 };

// Active instruction set. Defaults to the best supported one; the environment
// variable MTLAB_KERNELS=scalar|avx2 overrides at startup.
Isa active();
// Force a specific variant (used by the equivalence tests). Returns false if
// the requested variant is not supported on this machine.
bool set_active(Isa isa);
bool supported(Isa isa);
std::string isa_name(Isa isa);

// Scalar reference entry points, always available regardless of dispatch.
// These are the ground truth the vector variants are tested against.
namespace scalar {
Cplx phase_sum(const double* px, const double* py, const double* pz, const double* w,
               std::size_t n, Vec3 q);
Cplx phase_sum_cplx(const double* px, const double* py, const double* pz, const double* ar,
                    const double* ai, std::size_t n, Vec3 q);
double tube_mass(const double* px, const double* py, const double* pz, const double* w,
                 std::size_t n, Vec3 anchor, Vec3 dir, double rad2);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
Cplx phase_sum(const double* px, const double* py, const double* pz, const double* w,
               std::size_t n, Vec3 q);
Cplx phase_sum_cplx(const double* px, const double* py, const double* pz, const double* ar,
                    const double* ai, std::size_t n, Vec3 q);
double tube_mass(const double* px, const double* py, const double* pz, const double* w,
                 std::size_t n, Vec3 anchor, Vec3 dir, double rad2);
}  // namespace avx2
#endif

}  // namespace mtlab::kernels
