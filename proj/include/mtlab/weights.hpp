#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtlab/cover.hpp"

namespace mtlab {

enum class WeightModel { selector, carbery_with_replacement, carbery_without_replacement, full, custom };

WeightModel weight_model_from_string(const std::string& s);
std::string to_string(WeightModel m);

// A random weight w = sum_k m_k 1_{cell_k}: a sparse multiplicity map over
// cover cells. The cover is referenced by its parameters (R, d, geometry),
// which rebuild it deterministically.
struct Weight {
    WeightModel model = WeightModel::custom;
    std::uint64_t seed = 0;
    double R = 0.0;
    int dim = 0;
    CellGeometry geometry = CellGeometry::cube;
    double cell_volume = 0.0;
    std::vector<std::uint32_t> indices;         // sorted, unique cover indices
    std::vector<std::uint32_t> multiplicities;  // aligned with indices, all >= 1

    std::size_t support_size() const { return indices.size(); }
};

// Model parameters for the weight samplers. For the selector model the
// inclusion probability is delta = min(1, c * R^(lambda-1)); for the Carbery
// models m is the number of draws (0 = the default R^(d-1)).
struct ModelSpec {
    WeightModel tag = WeightModel::selector;
    double c = 1.0;
    double lambda = 0.0;
    std::uint64_t m = 0;
    bool replacement = false;
};

double selector_delta(const ModelSpec& spec, double R);

// Each cell joins independently with probability delta = min(1, c*R^(lambda-1)).
Weight sample_selector_weight(const CellCover& cover, double c, double lambda,
                              std::uint64_t seed);

// m cells drawn uniformly, with or without replacement; multiplicities
// accumulate in the with-replacement mode.
Weight sample_carbery_weight(const CellCover& cover, std::uint64_t m, bool replacement,
                             std::uint64_t seed);

// Every cell once.
Weight full_weight(const CellCover& cover);

Weight sample_weight(const CellCover& cover, const ModelSpec& spec, std::uint64_t seed);

// ||w||_1 = sum_k m_k * cellVolume (cells have disjoint interiors).
double weight_mass(const Weight& w);

std::string weight_to_json(const Weight& w);
Weight weight_from_json(const std::string& text);

// Throws if the weight was not sampled against this cover's parameters.
void check_weight_cover(const Weight& w, const CellCover& cover);

}  // namespace mtlab
