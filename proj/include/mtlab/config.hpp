#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mtlab/chaining.hpp"
#include "mtlab/cover.hpp"
#include "mtlab/probbounds.hpp"
#include "mtlab/surface.hpp"
#include "mtlab/tubes.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

// Experiment configuration, loaded from JSON. Unknown fields are rejected so
// a typoed parameter never silently falls back to a default.
struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::circle;
    int d = 2;
    int M = 0;  // 0 = default_node_count(d, R)
};

struct CoverSpec {
    double R = 16.0;
    std::vector<double> Rs;  // scaling studies; overrides R when nonempty
    int d = 2;
    CellGeometry geometry = CellGeometry::cube;
};

struct RunSpec {
    int N = 32;
    std::uint64_t master_seed = 0;
    double tol = 1e-10;
    int max_iter = 10000;
    bool convergence_check = true;
};

struct OutputSpec {
    std::string directory = "out";
    std::string format = "csv";
};

struct MaureySpec {
    std::size_t n = 8;
    std::size_t dim = 16;
    double vector_norm = 0.5;
    double eps = 0.5;
    NetMode mode = NetMode::enumerated;
    std::uint64_t budget = 1000000;
    std::size_t coverage_samples = 200;
    std::size_t net_samples = 1024;  // sampled mode
};

struct CoveringSpec {
    std::vector<double> eps_list{0.5};
    std::size_t sample_count = 200;
};

struct ExperimentConfig {
    SurfaceSpec surface;
    CoverSpec cover;
    ModelSpec model;
    RunSpec run;
    OutputSpec output;
    TubeSearchSpec tube_search;
    TailStudySpec tail;
    MaureySpec maurey;
    CoveringSpec covering;

    std::string canonical_json() const;  // sorted keys, for hashing
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

std::string config_hash(const ExperimentConfig& cfg);

}  // namespace mtlab
