#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtlab/cover.hpp"
#include "mtlab/rng.hpp"
#include "mtlab/surface.hpp"

namespace mtlab {

// The balanced convex hull C = { sum_k alpha_k y_k : sum_k |alpha_k| <= 1 }
// of vectors y_1..y_n in R^N with max norm K.
struct PolytopeSpec {
    std::vector<std::vector<double>> vectors;  // n vectors, each of length N
    double bound_k = 0.0;                      // max_k ||y_k||_2, filled on build
};

PolytopeSpec make_polytope(std::vector<std::vector<double>> vectors);

enum class NetMode { enumerated, sampled };

// An empirical-method net: each point is the average of `depth` picks from
// {0, +-y_1, ..., +-y_n}. Enumerated mode lists every distinct multiset
// average; sampled mode draws random net points.
struct MaureyNet {
    int depth = 0;
    NetMode mode = NetMode::enumerated;
    std::size_t dim = 0;
    std::vector<std::vector<double>> points;
};

// depth = ceil((2K/eps)^2) makes the empirical-method variance bound
// (2K)^2/depth force expected error <= eps, so the net is an eps-net of the
// hull. Enumerated mode requires (2n+1)^depth <= budget.
MaureyNet maurey_net(const PolytopeSpec& spec, double eps, NetMode mode, std::uint64_t seed,
                     std::uint64_t budget = 1000000, std::size_t sample_count = 1024);

// Euclidean distance from x to the closest net point.
double net_distance(const MaureyNet& net, std::span<const double> x);

// Draws a random point of the hull (signed coefficients with |.|_1 <= 1).
std::vector<double> random_hull_point(const PolytopeSpec& spec, Xoshiro256& rng);

struct CoveringRow {
    double eps = 0.0;
    std::size_t packing_size = 0;
    double log_packing = 0.0;
    double envelope = 0.0;                // log(n) / eps^2
    std::vector<std::size_t> packing;     // retained sample indices
};

// The s-th sample density drawn by covering_check for a given seed (unit
// L^2(Sigma) norm); exposed so tests can re-verify the packing separation.
std::vector<std::complex<double>> covering_sample(const QuadratureRule& rule,
                                                  std::uint64_t seed, std::size_t s);

// Greedy packing of random unit-norm densities under the cell-integral
// seminorm: a lower-bound witness for the covering number, reported next to
// the (log n)/eps^2 envelope.
std::vector<CoveringRow> covering_check(const QuadratureRule& rule, const CellCover& cover,
                                        const std::vector<double>& eps_list,
                                        std::size_t sample_count, std::uint64_t seed);

}  // namespace mtlab
