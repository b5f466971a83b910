#include <cstdlib>
#include <cstring>

#include "mtlab/kernels.hpp"

namespace mtlab::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa pick_default() {
    if (const char* env = std::getenv("MTLAB_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

Isa g_active = pick_default();

}  // namespace

Isa active() { return g_active; }

bool supported(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

bool set_active(Isa isa) {
    if (!supported(isa)) return false;
    g_active = isa;
    return true;
}

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Cplx phase_sum(const double* px, const double* py, const double* pz, const double* w,
               std::size_t n, Vec3 q) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_active == Isa::avx2) return avx2::phase_sum(px, py, pz, w, n, q);
#endif
    return scalar::phase_sum(px, py, pz, w, n, q);
}

Cplx phase_sum_cplx(const double* px, const double* py, const double* pz, const double* ar,
                    const double* ai, std::size_t n, Vec3 q) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_active == Isa::avx2) return avx2::phase_sum_cplx(px, py, pz, ar, ai, n, q);
#endif
    return scalar::phase_sum_cplx(px, py, pz, ar, ai, n, q);
}

double tube_mass(const double* px, const double* py, const double* pz, const double* w,
                 std::size_t n, Vec3 anchor, Vec3 dir, double rad2) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_active == Isa::avx2) return avx2::tube_mass(px, py, pz, w, n, anchor, dir, rad2);
#endif
    return scalar::tube_mass(px, py, pz, w, n, anchor, dir, rad2);
}

}  // namespace mtlab::kernels
