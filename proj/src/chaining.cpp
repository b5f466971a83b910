#include "mtlab/chaining.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

#include "mtlab/errors.hpp"
#include "mtlab/kernels.hpp"
#include "mtlab/parallel.hpp"

namespace mtlab {

PolytopeSpec make_polytope(std::vector<std::vector<double>> vectors) {
    if (vectors.empty()) throw ConfigError("polytope needs at least one vector");
    const std::size_t dim = vectors.front().size();
    PolytopeSpec spec;
    for (const auto& v : vectors) {
        if (v.size() != dim) throw DimensionError("polytope vectors must share a dimension");
        double n2 = 0.0;
        for (double c : v) n2 += c * c;
        spec.bound_k = std::max(spec.bound_k, std::sqrt(n2));
    }
    spec.vectors = std::move(vectors);
    return spec;
}

namespace {

// Enumerates all signed pick-count vectors c in Z^n with sum |c_k| <= depth;
// each yields the distinct net point (1/depth) sum_k c_k y_k. This lists
// exactly the distinct averages of depth picks from {0, +-y_1, ..., +-y_n}.
void enumerate_counts(std::size_t n, int depth,
                      const std::function<void(const std::vector<int>&)>& emit) {
    std::vector<int> counts(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
        if (k == n) {
            emit(counts);
            return;
        }
        for (int c = -left; c <= left; ++c) {
            counts[k] = c;
            rec(k + 1, left - std::abs(c));
        }
        counts[k] = 0;
    };
    rec(0, depth);
}

}  // namespace

MaureyNet maurey_net(const PolytopeSpec& spec, double eps, NetMode mode, std::uint64_t seed,
                     std::uint64_t budget, std::size_t sample_count) {
    if (eps <= 0.0) throw ConfigError("maurey_net: eps must be positive");
    const std::size_t n = spec.vectors.size();
    const std::size_t dim = spec.vectors.front().size();
    const double ratio = 2.0 * spec.bound_k / eps;
    // Slack keeps 1-ulp noise in K from bumping the depth past an integer.
    const int depth = std::max(1, static_cast<int>(std::ceil(ratio * ratio - 1e-9)));

    MaureyNet net;
    net.depth = depth;
    net.mode = mode;
    net.dim = dim;

    if (mode == NetMode::enumerated) {
        // Budget gate on the tuple count (2n+1)^depth.
        const double tuple_count = std::pow(2.0 * static_cast<double>(n) + 1.0, depth);
        if (tuple_count > static_cast<double>(budget))
            throw ConfigError("maurey_net: enumeration budget exceeded, (2n+1)^k = " +
                              std::to_string(tuple_count) + " > budget " +
                              std::to_string(budget) +
                              "; raise the budget or use sampled mode");
        enumerate_counts(n, depth, [&](const std::vector<int>& counts) {
            std::vector<double> p(dim, 0.0);
            for (std::size_t k = 0; k < n; ++k) {
                if (counts[k] == 0) continue;
                const double c = static_cast<double>(counts[k]) / depth;
                for (std::size_t i = 0; i < dim; ++i) p[i] += c * spec.vectors[k][i];
            }
            net.points.push_back(std::move(p));
        });
    } else {
        Xoshiro256 rng(derive_seed(seed, stream::kSample));
        net.points.reserve(sample_count);
        for (std::size_t s = 0; s < sample_count; ++s) {
            std::vector<double> p(dim, 0.0);
            for (int j = 0; j < depth; ++j) {
                // Pick uniformly from {0, +-y_1, ..., +-y_n}.
                const std::uint64_t pick = rng.below(2 * n + 1);
                if (pick == 0) continue;
                const std::size_t k = (pick - 1) / 2;
                const double sign = (pick % 2 == 1) ? 1.0 : -1.0;
                for (std::size_t i = 0; i < dim; ++i)
                    p[i] += sign * spec.vectors[k][i] / depth;
            }
            net.points.push_back(std::move(p));
        }
    }
    return net;
}

double net_distance(const MaureyNet& net, std::span<const double> x) {
    if (x.size() != net.dim) throw DimensionError("net_distance: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : net.points) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double diff = p[i] - x[i];
            d2 += diff * diff;
        }
        best = std::min(best, d2);
    }
    return std::sqrt(best);
}

std::vector<double> random_hull_point(const PolytopeSpec& spec, Xoshiro256& rng) {
    const std::size_t n = spec.vectors.size();
    const std::size_t dim = spec.vectors.front().size();
    // Random signed coefficients with |.|_1 <= 1: exponential spacings for a
    // uniform simplex point, a random total mass, and random signs.
    std::vector<double> lam(n);
    double total = 0.0;
    for (auto& l : lam) {
        l = -std::log(1.0 - rng.uniform());
        total += l;
    }
    const double mass = rng.uniform();
    std::vector<double> x(dim, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double coeff = (rng.bernoulli(0.5) ? 1.0 : -1.0) * mass * lam[k] / total;
        for (std::size_t i = 0; i < dim; ++i) x[i] += coeff * spec.vectors[k][i];
    }
    return x;
}

std::vector<std::complex<double>> covering_sample(const QuadratureRule& rule,
                                                  std::uint64_t seed, std::size_t s) {
    Xoshiro256 rng(derive_seed(seed, stream::kSample + (s << 8)));
    const std::size_t M = rule.size();
    std::vector<std::complex<double>> g(M);
    for (auto& c : g) c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    double norm2_sigma = 0.0;
    for (std::size_t j = 0; j < M; ++j) norm2_sigma += rule.sigma[j] * std::norm(g[j]);
    const double inv = 1.0 / std::sqrt(norm2_sigma);
    for (auto& c : g) c *= inv;
    return g;
}

std::vector<CoveringRow> covering_check(const QuadratureRule& rule, const CellCover& cover,
                                        const std::vector<double>& eps_list,
                                        std::size_t sample_count, std::uint64_t seed) {
    for (double e : eps_list)
        if (e <= 0.0 || e > 1.0) throw ConfigError("covering_check: eps must be in (0, 1]");
    if (sample_count < 10) throw ConfigError("covering_check: need sampleCount >= 10");

    const std::size_t M = rule.size();
    const std::size_t ncells = cover.size();

    // Cell-integral vectors: I_k(g) = sum_j sigma_j g_j exp(2 pi i omega_j.c_k)
    // F(omega_j). The seminorm distance between two samples is the max over
    // cells of |I_k(g) - I_k(g')|, so precomputing I collapses the pairwise
    // cost during the greedy packing.
    std::vector<double> f(M);
    for (std::size_t j = 0; j < M; ++j)
        f[j] = cell_fourier(cover.geometry, cover.dim, rule.node(j));

    std::vector<std::vector<std::complex<double>>> cell_integrals(sample_count);
    parallel_for(sample_count, [&](std::size_t s) {
        const std::vector<std::complex<double>> g = covering_sample(rule, seed, s);
        std::vector<double> ar(M), ai(M);
        for (std::size_t j = 0; j < M; ++j) {
            ar[j] = rule.sigma[j] * g[j].real() * f[j];
            ai[j] = rule.sigma[j] * g[j].imag() * f[j];
        }
        auto& row = cell_integrals[s];
        row.resize(ncells);
        for (std::size_t k = 0; k < ncells; ++k) {
            const kernels::Cplx v =
                kernels::phase_sum_cplx(rule.nx.data(), rule.ny.data(), rule.nz.data(),
                                        ar.data(), ai.data(), M, cover.center(k));
            row[k] = {v.re, v.im};
        }
    });

    const auto seminorm_dist = [&](std::size_t a, std::size_t b) {
        double best = 0.0;
        for (std::size_t k = 0; k < ncells; ++k)
            best = std::max(best, std::abs(cell_integrals[a][k] - cell_integrals[b][k]));
        return best;
    };

    std::vector<CoveringRow> table;
    for (double eps : eps_list) {
        std::vector<std::size_t> kept;
        for (std::size_t s = 0; s < sample_count; ++s) {
            bool separated = true;
            for (std::size_t t : kept) {
                if (seminorm_dist(s, t) <= eps) {
                    separated = false;
                    break;
                }
            }
            if (separated) kept.push_back(s);
        }
        CoveringRow row;
        row.eps = eps;
        row.packing_size = kept.size();
        row.log_packing = std::log(static_cast<double>(kept.size()));
        row.envelope = std::log(static_cast<double>(ncells)) / (eps * eps);
        row.packing = kept;
        table.push_back(row);
    }
    return table;
}

}  // namespace mtlab
