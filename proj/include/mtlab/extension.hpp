#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "mtlab/cover.hpp"
#include "mtlab/surface.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

// Eg(x) = sum_j sigma_j g_j exp(2*pi*i * omega_j . x), the quadrature form of
// the extension operator.
std::complex<double> evaluate_extension(const QuadratureRule& rule,
                                        std::span<const std::complex<double>> g, Vec3 x);

// Hermitian PSD matrix of the quadratic form g -> integral of w |Eg|^2:
//   A_jl = sqrt(sigma_j sigma_l) * F(omega_j - omega_l)
//          * sum_k m_k exp(2*pi*i (omega_j - omega_l) . c_k),
// the Gram matrix of phi_j = sqrt(sigma_j) exp(2*pi*i omega_j . x) in
// L^2(w dx) with the inner product linear in the first slot: the energy of
// the coefficient vector t is sum_jl t_j conj(t_l) A_jl. (That form and the
// conventional t* A t differ by transposition, which leaves the spectrum,
// and hence the functional, unchanged.) Coefficients are rescaled by
// sqrt(sigma), so Euclidean unit vectors are unit-norm densities in
// L^2(Sigma).
struct GramMatrix {
    std::size_t size = 0;
    std::vector<std::complex<double>> a;  // row-major, size x size
    std::string provenance;

    std::complex<double>& at(std::size_t j, std::size_t l) { return a[j * size + l]; }
    const std::complex<double>& at(std::size_t j, std::size_t l) const {
        return a[j * size + l];
    }
    double trace() const;
};

GramMatrix assemble_gram(const QuadratureRule& rule, const CellCover& cover,
                         const Weight& weight);

// Debug dump: Gram matrices are not persisted by default (they are M x M);
// this writes a self-describing little-endian binary file. Layout: 8-byte
// magic "MTLGRAM\0", then u64 M, u64 d, u64 seed, then M*M complex entries
// row-major as interleaved (re, im) doubles.
void dump_gram(const GramMatrix& gram, int d, std::uint64_t seed,
               const std::string& path);
GramMatrix load_gram(const std::string& path, int* d_out = nullptr,
                     std::uint64_t* seed_out = nullptr);

// max over cover cells of | integral over the cell of Eg |, evaluated through
// the translation identity: the cell at c contributes
// sum_j sigma_j g_j exp(2*pi*i omega_j . c) F(omega_j). With cosine_only the
// integrand is the real-part operator (cos instead of exp).
double seminorm_tilde(const QuadratureRule& rule, const CellCover& cover,
                      std::span<const std::complex<double>> g, bool cosine_only = false);

// Empirical check of the separated-points inequality: lhs = sum_j |Eg(x_j)|^2
// against rhsMain = R^(eps*d) * integral over B_2R of |Eg|^2 (tensor-grid
// quadrature at spacing min(1/4, R^-eps / 2)).
struct SeparatedSumResult {
    double lhs = 0.0;
    double rhs_main = 0.0;
    double ratio = 0.0;
};

SeparatedSumResult separated_sum_check(const QuadratureRule& rule,
                                       std::span<const Vec3> points,
                                       std::span<const std::complex<double>> g, double R,
                                       double eps);

}  // namespace mtlab
