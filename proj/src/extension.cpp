#include "mtlab/extension.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "mtlab/errors.hpp"
#include "mtlab/kernels.hpp"
#include "mtlab/parallel.hpp"

namespace mtlab {

std::complex<double> evaluate_extension(const QuadratureRule& rule,
                                        std::span<const std::complex<double>> g, Vec3 x) {
    if (g.size() != rule.size())
        throw DimensionError("evaluate_extension: coefficient/node count mismatch");
    std::vector<double> ar(g.size()), ai(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        ar[j] = rule.sigma[j] * g[j].real();
        ai[j] = rule.sigma[j] * g[j].imag();
    }
    const kernels::Cplx v = kernels::phase_sum_cplx(rule.nx.data(), rule.ny.data(),
                                                    rule.nz.data(), ar.data(), ai.data(),
                                                    g.size(), x);
    return {v.re, v.im};
}

double GramMatrix::trace() const {
    double t = 0.0;
    for (std::size_t j = 0; j < size; ++j) t += at(j, j).real();
    return t;
}

GramMatrix assemble_gram(const QuadratureRule& rule, const CellCover& cover,
                         const Weight& weight) {
    if (rule.dim != cover.dim)
        throw ConfigError("assemble_gram: rule and cover dimension mismatch");
    check_weight_cover(weight, cover);

    const std::size_t M = rule.size();
    const std::size_t S = weight.support_size();
    GramMatrix gram;
    gram.size = M;
    gram.a.assign(M * M, {0.0, 0.0});
    gram.provenance = to_string(rule.kind) + "/M=" + std::to_string(M) + " " +
                      to_string(weight.model) + "/seed=" + std::to_string(weight.seed);

    // Support centers and multiplicities as SoA streams for the phase kernel.
    std::vector<double> sx(S), sy(S), sz(S), sm(S);
    for (std::size_t i = 0; i < S; ++i) {
        const Vec3 c = cover.center(weight.indices[i]);
        sx[i] = c.x;
        sy[i] = c.y;
        sz[i] = c.z;
        sm[i] = static_cast<double>(weight.multiplicities[i]);
    }

    std::vector<double> sqrt_sigma(M);
    for (std::size_t j = 0; j < M; ++j) sqrt_sigma[j] = std::sqrt(rule.sigma[j]);

    // Upper triangle, mirrored; rows are distributed cyclically so the
    // shrinking row length balances out.
    parallel_for(M, [&](std::size_t j) {
        const Vec3 wj = rule.node(j);
        for (std::size_t l = j; l < M; ++l) {
            const Vec3 q = wj - rule.node(l);
            const double f = cell_fourier(cover.geometry, cover.dim, q);
            const kernels::Cplx s =
                kernels::phase_sum(sx.data(), sy.data(), sz.data(), sm.data(), S, q);
            const double scale = sqrt_sigma[j] * sqrt_sigma[l] * f;
            gram.at(j, l) = {scale * s.re, scale * s.im};
        }
    });
    for (std::size_t j = 0; j < M; ++j)
        for (std::size_t l = 0; l < j; ++l) gram.at(j, l) = std::conj(gram.at(l, j));
    return gram;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "gram dump layout is little-endian");

constexpr char kGramMagic[8] = {'M', 'T', 'L', 'G', 'R', 'A', 'M', '\0'};

}  // namespace

void dump_gram(const GramMatrix& gram, int d, std::uint64_t seed,
               const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("dump_gram: cannot open " + path);
    const std::uint64_t m = gram.size;
    const std::uint64_t dim = static_cast<std::uint64_t>(d);
    out.write(kGramMagic, 8);
    out.write(reinterpret_cast<const char*>(&m), 8);
    out.write(reinterpret_cast<const char*>(&dim), 8);
    out.write(reinterpret_cast<const char*>(&seed), 8);
    out.write(reinterpret_cast<const char*>(gram.a.data()),
              static_cast<std::streamsize>(gram.a.size() * sizeof(std::complex<double>)));
}

GramMatrix load_gram(const std::string& path, int* d_out, std::uint64_t* seed_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("load_gram: cannot open " + path);
    char magic[8];
    std::uint64_t m = 0, dim = 0, seed = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&m), 8);
    in.read(reinterpret_cast<char*>(&dim), 8);
    in.read(reinterpret_cast<char*>(&seed), 8);
    if (!in || std::memcmp(magic, kGramMagic, 8) != 0)
        throw ConfigError("load_gram: bad header in " + path);
    GramMatrix gram;
    gram.size = m;
    gram.a.resize(m * m);
    in.read(reinterpret_cast<char*>(gram.a.data()),
            static_cast<std::streamsize>(gram.a.size() * sizeof(std::complex<double>)));
    if (!in) throw ConfigError("load_gram: truncated file " + path);
    if (d_out) *d_out = static_cast<int>(dim);
    if (seed_out) *seed_out = seed;
    return gram;
}

double seminorm_tilde(const QuadratureRule& rule, const CellCover& cover,
                      std::span<const std::complex<double>> g, bool cosine_only) {
    if (g.size() != rule.size())
        throw DimensionError("seminorm_tilde: coefficient/node count mismatch");
    if (rule.dim != cover.dim)
        throw ConfigError("seminorm_tilde: rule and cover dimension mismatch");

    // Per-node coefficient sigma_j g_j F(omega_j); the cell at c then sees the
    // plain phase sum at q = c.
    const std::size_t M = rule.size();
    std::vector<double> ar(M), ai(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double f = cell_fourier(cover.geometry, cover.dim, rule.node(j));
        ar[j] = rule.sigma[j] * g[j].real() * f;
        ai[j] = rule.sigma[j] * g[j].imag() * f;
    }

    const std::size_t n = cover.size();
    std::vector<double> cell_values(n);
    parallel_for(n, [&](std::size_t k) {
        const kernels::Cplx v = kernels::phase_sum_cplx(rule.nx.data(), rule.ny.data(),
                                                        rule.nz.data(), ar.data(), ai.data(),
                                                        M, cover.center(k));
        cell_values[k] = cosine_only ? std::abs(v.re) : std::hypot(v.re, v.im);
    });
    double best = 0.0;
    for (double v : cell_values) best = std::max(best, v);
    return best;
}

SeparatedSumResult separated_sum_check(const QuadratureRule& rule,
                                       std::span<const Vec3> points,
                                       std::span<const std::complex<double>> g, double R,
                                       double eps) {
    if (g.size() != rule.size())
        throw DimensionError("separated_sum_check: coefficient/node count mismatch");
    const double sep = std::pow(R, -eps);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (norm(points[i]) > R + 1e-12)
            throw PreconditionError("separated_sum_check: point outside B_R");
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (norm(points[i] - points[j]) < sep - 1e-12)
                throw PreconditionError("separated_sum_check: points closer than R^-eps");
    }

    SeparatedSumResult out;
    for (const Vec3& p : points) out.lhs += std::norm(evaluate_extension(rule, g, p));

    // Tensor-grid quadrature of |Eg|^2 over B_2R.
    const double h = std::min(0.25, 0.5 * sep);
    const double limit = 2.0 * R;
    const long nside = static_cast<long>(std::floor(limit / h));
    const int d = rule.dim;
    const double cell = d == 2 ? h * h : h * h * h;

    std::vector<double> ar(g.size()), ai(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        ar[j] = rule.sigma[j] * g[j].real();
        ai[j] = rule.sigma[j] * g[j].imag();
    }

    const long nz = d == 3 ? nside : 0;
    const std::size_t rows = static_cast<std::size_t>(2 * nside + 1);
    std::vector<double> row_sums(rows, 0.0);
    parallel_for(rows, [&](std::size_t row) {
        const long ix = static_cast<long>(row) - nside;
        const double x = ix * h;
        double acc = 0.0;
        for (long iy = -nside; iy <= nside; ++iy) {
            const double y = iy * h;
            for (long iz = -nz; iz <= nz; ++iz) {
                const Vec3 p{x, y, iz * h};
                if (norm2(p) > limit * limit) continue;
                const kernels::Cplx v =
                    kernels::phase_sum_cplx(rule.nx.data(), rule.ny.data(), rule.nz.data(),
                                            ar.data(), ai.data(), g.size(), p);
                acc += v.re * v.re + v.im * v.im;
            }
        }
        row_sums[row] = acc;
    });
    double integral = 0.0;
    for (double v : row_sums) integral += v;
    integral *= cell;

    out.rhs_main = std::pow(R, eps * d) * integral;
    out.ratio = out.rhs_main == 0.0 ? 0.0 : out.lhs / out.rhs_main;
    return out;
}

}  // namespace mtlab
