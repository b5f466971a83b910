#include "mtlab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mtlab/errors.hpp"
#include "mtlab/io.hpp"

namespace mtlab {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& known) {
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key))
            throw ConfigError("config: unknown field \"" + key + "\" in " + where);
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_surface(const json& j, SurfaceSpec& s) {
    reject_unknown(j, "surface", {"kind", "d", "M"});
    std::string kind = to_string(s.kind);
    read_field(j, "kind", kind);
    s.kind = surface_kind_from_string(kind);
    read_field(j, "d", s.d);
    read_field(j, "M", s.M);
}

void parse_cover(const json& j, CoverSpec& c) {
    reject_unknown(j, "cover", {"R", "Rs", "d", "geometry"});
    read_field(j, "R", c.R);
    read_field(j, "Rs", c.Rs);
    read_field(j, "d", c.d);
    std::string geo = to_string(c.geometry);
    read_field(j, "geometry", geo);
    c.geometry = cell_geometry_from_string(geo);
}

void parse_model(const json& j, ModelSpec& m) {
    reject_unknown(j, "model", {"tag", "c", "lambda", "m", "replacement"});
    std::string tag = to_string(m.tag);
    read_field(j, "tag", tag);
    m.tag = weight_model_from_string(tag);
    read_field(j, "c", m.c);
    read_field(j, "lambda", m.lambda);
    read_field(j, "m", m.m);
    read_field(j, "replacement", m.replacement);
    if (m.tag == WeightModel::carbery_with_replacement) m.replacement = true;
    if (m.tag == WeightModel::carbery_without_replacement) m.replacement = false;
}

void parse_run(const json& j, RunSpec& r) {
    reject_unknown(j, "run", {"N", "masterSeed", "tol", "maxIter", "convergenceCheck"});
    read_field(j, "N", r.N);
    read_field(j, "masterSeed", r.master_seed);
    read_field(j, "tol", r.tol);
    read_field(j, "maxIter", r.max_iter);
    read_field(j, "convergenceCheck", r.convergence_check);
}

void parse_output(const json& j, OutputSpec& o) {
    reject_unknown(j, "output", {"directory", "format"});
    read_field(j, "directory", o.directory);
    read_field(j, "format", o.format);
}

void parse_tube(const json& j, TubeSearchSpec& t) {
    reject_unknown(j, "tubeSearch",
                   {"angularResolution", "offsetSpacing", "refinementRounds", "method"});
    read_field(j, "angularResolution", t.angular_resolution);
    read_field(j, "offsetSpacing", t.offset_spacing);
    read_field(j, "refinementRounds", t.refinement_rounds);
    if (j.contains("method"))
        t.method = occupancy_method_from_string(j.at("method").get<std::string>());
}

void parse_tail(const json& j, TailStudySpec& t) {
    reject_unknown(j, "tail",
                   {"bound", "n", "delta", "R", "chernoffC", "thresholds", "samples", "seed"});
    if (j.contains("bound"))
        t.kind = tail_bound_kind_from_string(j.at("bound").get<std::string>());
    read_field(j, "n", t.n);
    read_field(j, "delta", t.delta);
    read_field(j, "R", t.R);
    read_field(j, "chernoffC", t.chernoff_c);
    read_field(j, "thresholds", t.thresholds);
    read_field(j, "samples", t.samples);
    read_field(j, "seed", t.seed);
}

void parse_maurey(const json& j, MaureySpec& m) {
    reject_unknown(j, "maurey",
                   {"n", "dim", "vectorNorm", "epsilon", "mode", "budget", "coverageSamples",
                    "netSamples"});
    read_field(j, "n", m.n);
    read_field(j, "dim", m.dim);
    read_field(j, "vectorNorm", m.vector_norm);
    read_field(j, "epsilon", m.eps);
    if (j.contains("mode")) {
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "enumerated")
            m.mode = NetMode::enumerated;
        else if (mode == "sampled")
            m.mode = NetMode::sampled;
        else
            throw ConfigError("config: unknown maurey mode: " + mode);
    }
    read_field(j, "budget", m.budget);
    read_field(j, "coverageSamples", m.coverage_samples);
    read_field(j, "netSamples", m.net_samples);
}

void parse_covering(const json& j, CoveringSpec& c) {
    reject_unknown(j, "covering", {"epsilons", "sampleCount"});
    read_field(j, "epsilons", c.eps_list);
    read_field(j, "sampleCount", c.sample_count);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j, "top level",
                   {"surface", "cover", "model", "run", "output", "tubeSearch", "tail",
                    "maurey", "covering"});
    ExperimentConfig cfg;
    try {
        if (j.contains("surface")) parse_surface(j.at("surface"), cfg.surface);
        if (j.contains("cover")) parse_cover(j.at("cover"), cfg.cover);
        if (j.contains("model")) parse_model(j.at("model"), cfg.model);
        if (j.contains("run")) parse_run(j.at("run"), cfg.run);
        if (j.contains("output")) parse_output(j.at("output"), cfg.output);
        if (j.contains("tubeSearch")) parse_tube(j.at("tubeSearch"), cfg.tube_search);
        if (j.contains("tail")) parse_tail(j.at("tail"), cfg.tail);
        if (j.contains("maurey")) parse_maurey(j.at("maurey"), cfg.maurey);
        if (j.contains("covering")) parse_covering(j.at("covering"), cfg.covering);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // Cross-field consistency.
    if (cfg.surface.d != cfg.cover.d)
        throw ConfigError("config: surface.d and cover.d disagree");
    if (cfg.model.lambda < 0.0 || cfg.model.lambda >= 1.0)
        throw ConfigError("config: model.lambda must lie in [0, 1)");
    if (cfg.run.N < 1) throw ConfigError("config: run.N must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// Canonical form covers the scientific identity of a run; presentation
// fields (the output section) stay out so the same experiment written to two
// directories hashes, and names its artifacts, identically.
std::string ExperimentConfig::canonical_json() const {
    json j;
    j["surface"] = {{"kind", to_string(surface.kind)}, {"d", surface.d}, {"M", surface.M}};
    j["cover"] = {{"R", cover.R},
                  {"Rs", cover.Rs},
                  {"d", cover.d},
                  {"geometry", to_string(cover.geometry)}};
    j["model"] = {{"tag", to_string(model.tag)},
                  {"c", model.c},
                  {"lambda", model.lambda},
                  {"m", model.m},
                  {"replacement", model.replacement}};
    j["run"] = {{"N", run.N},
                {"masterSeed", run.master_seed},
                {"tol", run.tol},
                {"maxIter", run.max_iter},
                {"convergenceCheck", run.convergence_check}};
    j["tubeSearch"] = {{"angularResolution", tube_search.angular_resolution},
                       {"offsetSpacing", tube_search.offset_spacing},
                       {"refinementRounds", tube_search.refinement_rounds},
                       {"method", tube_search.method == OccupancyMethod::center_indicator
                                      ? "center-indicator"
                                      : "volume-fraction"}};
    j["tail"] = {{"bound", to_string(tail.kind)}, {"n", tail.n},
                 {"delta", tail.delta},          {"R", tail.R},
                 {"chernoffC", tail.chernoff_c}, {"thresholds", tail.thresholds},
                 {"samples", tail.samples},      {"seed", tail.seed}};
    j["maurey"] = {{"n", maurey.n},
                   {"dim", maurey.dim},
                   {"vectorNorm", maurey.vector_norm},
                   {"epsilon", maurey.eps},
                   {"mode", maurey.mode == NetMode::enumerated ? "enumerated" : "sampled"},
                   {"budget", maurey.budget},
                   {"coverageSamples", maurey.coverage_samples},
                   {"netSamples", maurey.net_samples}};
    j["covering"] = {{"epsilons", covering.eps_list}, {"sampleCount", covering.sample_count}};
    return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
    return hex64(fnv1a64(cfg.canonical_json()));
}

}  // namespace mtlab
