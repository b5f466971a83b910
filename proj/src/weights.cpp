#include "mtlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "mtlab/errors.hpp"
#include "mtlab/rng.hpp"

namespace mtlab {

using nlohmann::json;

WeightModel weight_model_from_string(const std::string& s) {
    if (s == "selector") return WeightModel::selector;
    if (s == "carbery-with-replacement") return WeightModel::carbery_with_replacement;
    if (s == "carbery-without-replacement") return WeightModel::carbery_without_replacement;
    if (s == "full") return WeightModel::full;
    if (s == "custom") return WeightModel::custom;
    throw ConfigError("unknown weight model: " + s);
}

std::string to_string(WeightModel m) {
    switch (m) {
        case WeightModel::selector: return "selector";
        case WeightModel::carbery_with_replacement: return "carbery-with-replacement";
        case WeightModel::carbery_without_replacement: return "carbery-without-replacement";
        case WeightModel::full: return "full";
        case WeightModel::custom: return "custom";
    }
    return "?";
}

namespace {

Weight make_shell(const CellCover& cover, WeightModel model, std::uint64_t seed) {
    Weight w;
    w.model = model;
    w.seed = seed;
    w.R = cover.R;
    w.dim = cover.dim;
    w.geometry = cover.geometry;
    w.cell_volume = cover.cell_volume;
    return w;
}

}  // namespace

double selector_delta(const ModelSpec& spec, double R) {
    return std::min(1.0, spec.c * std::pow(R, spec.lambda - 1.0));
}

Weight sample_selector_weight(const CellCover& cover, double c, double lambda,
                              std::uint64_t seed) {
    if (c <= 0.0) throw ConfigError("selector model requires c > 0");
    if (lambda < 0.0 || lambda >= 1.0)
        throw ConfigError("selector model requires 0 <= lambda < 1");
    const double delta = std::min(1.0, c * std::pow(cover.R, lambda - 1.0));
    Weight w = make_shell(cover, WeightModel::selector, seed);
    Xoshiro256 rng(derive_seed(seed, stream::kWeight));
    for (std::size_t k = 0; k < cover.size(); ++k) {
        if (rng.bernoulli(delta)) {
            w.indices.push_back(static_cast<std::uint32_t>(k));
            w.multiplicities.push_back(1);
        }
    }
    return w;
}

Weight sample_carbery_weight(const CellCover& cover, std::uint64_t m, bool replacement,
                             std::uint64_t seed) {
    const std::uint64_t count = cover.size();
    if (m < 1) throw ConfigError("carbery model requires m >= 1");
    if (!replacement && m > count)
        throw ConfigError("carbery model without replacement requires m <= cell count (" +
                          std::to_string(count) + ")");
    Weight w = make_shell(cover,
                          replacement ? WeightModel::carbery_with_replacement
                                      : WeightModel::carbery_without_replacement,
                          seed);
    Xoshiro256 rng(derive_seed(seed, stream::kWeight));
    if (replacement) {
        std::map<std::uint32_t, std::uint32_t> mult;
        for (std::uint64_t j = 0; j < m; ++j)
            ++mult[static_cast<std::uint32_t>(rng.below(count))];
        for (const auto& [k, c] : mult) {
            w.indices.push_back(k);
            w.multiplicities.push_back(c);
        }
    } else {
        // Partial Fisher-Yates over the index array.
        std::vector<std::uint32_t> pool(count);
        std::iota(pool.begin(), pool.end(), 0u);
        for (std::uint64_t j = 0; j < m; ++j) {
            const std::uint64_t pick = j + rng.below(count - j);
            std::swap(pool[j], pool[pick]);
        }
        pool.resize(m);
        std::sort(pool.begin(), pool.end());
        w.indices = std::move(pool);
        w.multiplicities.assign(m, 1);
    }
    return w;
}

Weight full_weight(const CellCover& cover) {
    Weight w = make_shell(cover, WeightModel::full, 0);
    w.indices.resize(cover.size());
    std::iota(w.indices.begin(), w.indices.end(), 0u);
    w.multiplicities.assign(cover.size(), 1);
    return w;
}

Weight sample_weight(const CellCover& cover, const ModelSpec& spec, std::uint64_t seed) {
    switch (spec.tag) {
        case WeightModel::selector:
            return sample_selector_weight(cover, spec.c, spec.lambda, seed);
        case WeightModel::carbery_with_replacement:
        case WeightModel::carbery_without_replacement: {
            std::uint64_t m = spec.m;
            if (m == 0)
                m = static_cast<std::uint64_t>(
                    std::llround(std::pow(cover.R, cover.dim - 1)));
            return sample_carbery_weight(
                cover, m, spec.tag == WeightModel::carbery_with_replacement, seed);
        }
        case WeightModel::full:
            return full_weight(cover);
        case WeightModel::custom:
            throw ConfigError("custom weights are loaded from JSON, not sampled");
    }
    throw ConfigError("invalid weight model");
}

double weight_mass(const Weight& w) {
    double total = 0.0;
    for (std::uint32_t m : w.multiplicities) total += static_cast<double>(m);
    return total * w.cell_volume;
}

std::string weight_to_json(const Weight& w) {
    json j;
    j["modelTag"] = to_string(w.model);
    j["seed"] = w.seed;
    j["R"] = w.R;
    j["d"] = w.dim;
    j["geometry"] = to_string(w.geometry);
    j["indices"] = w.indices;
    j["multiplicities"] = w.multiplicities;
    return j.dump(2);
}

Weight weight_from_json(const std::string& text) {
    const json j = json::parse(text);
    Weight w;
    w.model = weight_model_from_string(j.at("modelTag").get<std::string>());
    w.seed = j.at("seed").get<std::uint64_t>();
    w.R = j.at("R").get<double>();
    w.dim = j.at("d").get<int>();
    w.geometry = cell_geometry_from_string(j.at("geometry").get<std::string>());
    w.cell_volume = w.geometry == CellGeometry::cube
                        ? 1.0
                        : unit_ball_volume(w.dim) * std::pow(0.5, w.dim);
    w.indices = j.at("indices").get<std::vector<std::uint32_t>>();
    w.multiplicities = j.at("multiplicities").get<std::vector<std::uint32_t>>();
    if (w.indices.size() != w.multiplicities.size())
        throw ConfigError("weight JSON: indices/multiplicities length mismatch");
    return w;
}

void check_weight_cover(const Weight& w, const CellCover& cover) {
    if (w.dim != cover.dim || w.R != cover.R || w.geometry != cover.geometry)
        throw DimensionError("weight was sampled against a different cover");
    if (!w.indices.empty() && w.indices.back() >= cover.size())
        throw DimensionError("weight support index out of range for cover");
}

}  // namespace mtlab
