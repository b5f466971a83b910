#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mtlab/extension.hpp"
#include "mtlab/rng.hpp"
#include "mtlab/tubes.hpp"

namespace mtlab {

// Top-eigenvalue estimate of a weighted Gram matrix: the discretized value of
// sup over unit-norm g of the weighted energy, plus the maximizing
// coefficient vector and a residual certificate.
struct MTEstimate {
    double value = 0.0;
    std::vector<std::complex<double>> maximizer;  // Euclidean unit norm
    int iterations = 0;
    double residual = 0.0;
    std::size_t nodes = 0;
    // Relative change of value under doubling the node count, when computed.
    std::optional<double> node_doubling_change;
};

// Thrown when power iteration exhausts its budget; carries the best iterate
// so the caller can retry from a fresh start or accept the partial answer.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, MTEstimate best)
        : std::runtime_error(what), best_(std::move(best)) {}
    const MTEstimate& best() const { return best_; }

  private:
    MTEstimate best_;
};

struct PowerOptions {
    double tol = 1e-10;  // relative Rayleigh-quotient change
    int max_iter = 10000;
};

// Power iteration from a random start vector. Converged when the relative
// Rayleigh change stays below tol on two consecutive iterations; after that,
// iteration continues while the residual keeps improving toward tol*value
// (clustered top eigenvalues make the residual plateau, which is accepted).
MTEstimate lambda_max(const GramMatrix& matrix, double tol, int max_iter, Xoshiro256& rng);

// Assembles the Gram matrix for (rule, weight) and returns its top eigenvalue:
// the discretized functional S(w).
MTEstimate mt_functional(const QuadratureRule& rule, const CellCover& cover,
                         const Weight& weight, const PowerOptions& opts,
                         std::uint64_t seed);

struct MonteCarloSummary {
    int trials = 0;
    std::vector<double> values;         // converged trials, by trial index
    std::vector<std::uint64_t> seeds;   // per-trial seeds, all trials
    std::vector<int> excluded_trials;   // indices of non-convergent trials
    double mean = 0.0;
    double stddev = 0.0;
    double ci_lo = 0.0;  // 95% normal-approximation interval
    double ci_hi = 0.0;
    ModelSpec model;
};

// N independent weight draws (counter-split seeds), each run through
// mt_functional. Non-convergent trials are excluded and counted.
MonteCarloSummary expected_mt(const QuadratureRule& rule, const CellCover& cover,
                              const ModelSpec& model, int N, std::uint64_t master_seed,
                              const PowerOptions& opts = {});

struct ScalingRow {
    double R = 0.0;
    std::string model;
    double lambda = 0.0;
    int N = 0;
    double mean_s = 0.0;
    double std_s = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_mass = 0.0;
    double mass_ratio = 0.0;  // mean mass / R^(d-1+lambda)
    double median_tube_sup = 0.0;
    int excluded = 0;
    std::uint64_t master_seed = 0;
    std::optional<double> node_doubling_change;  // spot check, first trial
};

struct ScalingStudySpec {
    std::vector<double> Rs;
    int d = 2;
    SurfaceKind kind = SurfaceKind::circle;
    CellGeometry geometry = CellGeometry::cube;
    ModelSpec model;
    int N = 32;
    std::uint64_t master_seed = 0;
    PowerOptions power;
    int nodes_per_R = 0;  // 0 = default_node_count(d, R)
    bool convergence_spot_check = true;
    TubeSearchSpec tube_search;  // resolution fields 0 = defaults from R
};

struct ScalingStudy {
    std::vector<ScalingRow> rows;
    // Least-squares slope of log(mean S) (resp. log mass, log median tube sup)
    // against log R; unset when fewer than 3 R values were given.
    std::optional<double> s_exponent;
    std::optional<double> mass_exponent;
    std::vector<double> s_residuals;
};

ScalingStudy scaling_study(const ScalingStudySpec& spec);

// Unweighted least squares fit of log(y) vs log(x); returns slope and fills
// residuals (log-scale) if requested.
double fit_log_exponent(const std::vector<double>& x, const std::vector<double>& y,
                        std::vector<double>* residuals = nullptr);

}  // namespace mtlab
