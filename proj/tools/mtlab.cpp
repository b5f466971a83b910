// mtlab: experiment driver for weighted extension-operator studies.
//
// Subcommands run one pipeline each (weight sampling, functional evaluation,
// Monte Carlo scaling studies, tube searches, tail studies, net/covering
// experiments) and write CSV/JSON artifacts plus a run manifest into the
// output directory. Identical configs and seeds produce byte-identical
// artifacts regardless of the worker pool size.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mtlab/chaining.hpp"
#include "mtlab/config.hpp"
#include "mtlab/errors.hpp"
#include "mtlab/functional.hpp"
#include "mtlab/io.hpp"
#include "mtlab/kernels.hpp"
#include "mtlab/parallel.hpp"
#include "mtlab/probbounds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mtlab;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> N;
    std::optional<double> R;
    std::vector<double> Rs;
    std::optional<int> d;
    std::optional<std::string> kind;
    std::optional<std::string> geometry;
    std::optional<std::string> model;
    std::optional<double> c;
    std::optional<double> lambda;
    std::optional<std::uint64_t> m;
    std::optional<int> M;
    bool dump_gram = false;
};

ExperimentConfig resolve_config(const CliOverrides& ov) {
    ExperimentConfig cfg;
    if (!ov.config_path.empty()) cfg = load_config(ov.config_path);
    if (ov.seed) cfg.run.master_seed = *ov.seed;
    if (ov.N) cfg.run.N = *ov.N;
    if (ov.R) cfg.cover.R = *ov.R;
    if (!ov.Rs.empty()) cfg.cover.Rs = ov.Rs;
    if (ov.d) {
        cfg.cover.d = *ov.d;
        cfg.surface.d = *ov.d;
    }
    if (ov.kind) cfg.surface.kind = surface_kind_from_string(*ov.kind);
    if (ov.geometry) cfg.cover.geometry = cell_geometry_from_string(*ov.geometry);
    if (ov.model) cfg.model.tag = weight_model_from_string(*ov.model);
    if (ov.c) cfg.model.c = *ov.c;
    if (ov.lambda) cfg.model.lambda = *ov.lambda;
    if (ov.m) cfg.model.m = *ov.m;
    if (ov.M) cfg.surface.M = *ov.M;

    if (const char* env = std::getenv("MTLAB_OUTPUT_DIR")) cfg.output.directory = env;
    if (!ov.out_dir.empty()) cfg.output.directory = ov.out_dir;

    if (cfg.surface.d != cfg.cover.d) throw ConfigError("surface.d and cover.d disagree");
    if (cfg.model.lambda < 0.0 || cfg.model.lambda >= 1.0)
        throw ConfigError("model.lambda must lie in [0, 1)");
    return cfg;
}

int surface_nodes(const ExperimentConfig& cfg, double R) {
    return cfg.surface.M > 0 ? cfg.surface.M : default_node_count(cfg.surface.d, R);
}

void write_manifest(const ExperimentConfig& cfg, const std::string& subcommand,
                    const std::vector<std::string>& artifacts, double wall_seconds) {
    json j;
    j["subcommand"] = subcommand;
    j["configHash"] = config_hash(cfg);
    j["masterSeed"] = cfg.run.master_seed;
    j["toolVersion"] = kVersion;
    j["wallTimeSeconds"] = wall_seconds;
    j["artifacts"] = artifacts;
    j["config"] = json::parse(cfg.canonical_json());
    const fs::path path = fs::path(cfg.output.directory) /
                          ("manifest_" + subcommand + "_" + config_hash(cfg) + ".json");
    write_file(path, j.dump(2) + "\n");
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

// ---------------------------------------------------------------- pipelines

int run_generate_weight(const ExperimentConfig& cfg) {
    Timer timer;
    const CellCover cover = build_cover(cfg.cover.R, cfg.cover.d, cfg.cover.geometry);
    const Weight w = sample_weight(cover, cfg.model, cfg.run.master_seed);
    const std::string name = "weight_" + config_hash(cfg) + ".json";
    write_file(fs::path(cfg.output.directory) / name, weight_to_json(w) + "\n");
    write_manifest(cfg, "generate-weight", {name}, timer.seconds());
    std::cout << "weight: support " << w.support_size() << " of " << cover.size()
              << " cells, mass " << fmt_g17(weight_mass(w)) << "\n";
    return 0;
}

json estimate_to_json(const MTEstimate& est) {
    json j;
    j["value"] = est.value;
    j["iterations"] = est.iterations;
    j["residual"] = est.residual;
    j["nodes"] = est.nodes;
    if (est.node_doubling_change) j["nodeDoublingChange"] = *est.node_doubling_change;
    return j;
}

int run_mt_functional(const ExperimentConfig& cfg, bool dump_gram_flag) {
    Timer timer;
    const double R = cfg.cover.R;
    const CellCover cover = build_cover(R, cfg.cover.d, cfg.cover.geometry);
    const Weight w = sample_weight(cover, cfg.model, cfg.run.master_seed);
    const int M = surface_nodes(cfg, R);
    const QuadratureRule rule = build_surface(cfg.surface.kind, cfg.surface.d, M);
    const PowerOptions opts{cfg.run.tol, cfg.run.max_iter};

    std::vector<std::string> artifacts;
    if (dump_gram_flag) {
        const GramMatrix gram = assemble_gram(rule, cover, w);
        const std::string bin = "gram_" + config_hash(cfg) + ".bin";
        std::filesystem::create_directories(cfg.output.directory);
        dump_gram(gram, cfg.cover.d, cfg.run.master_seed,
                  (fs::path(cfg.output.directory) / bin).string());
        artifacts.push_back(bin);
    }

    MTEstimate est = mt_functional(rule, cover, w, opts, cfg.run.master_seed);
    if (cfg.run.convergence_check) {
        const QuadratureRule fine = build_surface(cfg.surface.kind, cfg.surface.d, 2 * M);
        const MTEstimate refined = mt_functional(fine, cover, w, opts, cfg.run.master_seed);
        est.node_doubling_change =
            refined.value > 0.0 ? std::abs(refined.value - est.value) / refined.value : 0.0;
    }

    json j = estimate_to_json(est);
    j["mass"] = weight_mass(w);
    j["model"] = to_string(cfg.model.tag);
    j["R"] = R;
    const std::string name = "mt_" + config_hash(cfg) + ".json";
    write_file(fs::path(cfg.output.directory) / name, j.dump(2) + "\n");
    artifacts.push_back(name);
    write_manifest(cfg, "mt-functional", artifacts, timer.seconds());
    std::cout << "S(w) = " << fmt_g17(est.value) << " (residual " << fmt_g17(est.residual)
              << ", " << est.iterations << " iterations)";
    if (est.node_doubling_change) {
        std::cout << ", node-doubling change " << fmt_g17(*est.node_doubling_change);
        if (*est.node_doubling_change > 0.01) std::cout << "  [FLAG: > 1%]";
    }
    std::cout << "\n";
    return 0;
}

int run_expected_mt(const ExperimentConfig& cfg) {
    Timer timer;
    const double R = cfg.cover.R;
    const CellCover cover = build_cover(R, cfg.cover.d, cfg.cover.geometry);
    const QuadratureRule rule =
        build_surface(cfg.surface.kind, cfg.surface.d, surface_nodes(cfg, R));
    const PowerOptions opts{cfg.run.tol, cfg.run.max_iter};
    const MonteCarloSummary mc =
        expected_mt(rule, cover, cfg.model, cfg.run.N, cfg.run.master_seed, opts);
    if (mc.values.empty()) {
        std::cerr << "expected-mt: every trial failed to converge\n";
        return 3;
    }

    CsvTable csv;
    csv.header = {"trial", "seed", "value"};
    std::size_t vi = 0;
    for (int i = 0; i < mc.trials; ++i) {
        const bool excluded = std::find(mc.excluded_trials.begin(), mc.excluded_trials.end(),
                                        i) != mc.excluded_trials.end();
        csv.rows.push_back({std::to_string(i), std::to_string(mc.seeds[i]),
                            excluded ? "excluded" : fmt_g17(mc.values[vi++])});
    }
    json j;
    j["mean"] = mc.mean;
    j["std"] = mc.stddev;
    j["ci95"] = {mc.ci_lo, mc.ci_hi};
    j["trials"] = mc.trials;
    j["excluded"] = mc.excluded_trials.size();
    const std::string stem = "expected_" + config_hash(cfg);
    write_file(fs::path(cfg.output.directory) / (stem + ".csv"), csv_to_string(csv));
    write_file(fs::path(cfg.output.directory) / (stem + ".json"), j.dump(2) + "\n");
    write_manifest(cfg, "expected-mt", {stem + ".csv", stem + ".json"}, timer.seconds());
    std::cout << "E S(w) = " << fmt_g17(mc.mean) << " +- " << fmt_g17(mc.stddev) << " ("
              << mc.values.size() << "/" << mc.trials << " trials)\n";
    return 0;
}

int run_scaling_study(const ExperimentConfig& cfg) {
    Timer timer;
    ScalingStudySpec spec;
    spec.Rs = cfg.cover.Rs.empty() ? std::vector<double>{cfg.cover.R} : cfg.cover.Rs;
    spec.d = cfg.cover.d;
    spec.kind = cfg.surface.kind;
    spec.geometry = cfg.cover.geometry;
    spec.model = cfg.model;
    spec.N = cfg.run.N;
    spec.master_seed = cfg.run.master_seed;
    spec.power = {cfg.run.tol, cfg.run.max_iter};
    spec.nodes_per_R = cfg.surface.M;
    spec.convergence_spot_check = cfg.run.convergence_check;
    spec.tube_search = cfg.tube_search;
    const ScalingStudy study = scaling_study(spec);

    CsvTable csv;
    csv.header = {"R",        "model",    "lambda",       "N",
                  "meanS",    "stdS",     "ci95lo",       "ci95hi",
                  "meanMass", "massRatio", "medianTubeSup", "excluded",
                  "masterSeed"};
    for (const ScalingRow& row : study.rows) {
        csv.rows.push_back({fmt_g17(row.R), row.model, fmt_g17(row.lambda),
                            std::to_string(row.N), fmt_g17(row.mean_s), fmt_g17(row.std_s),
                            fmt_g17(row.ci_lo), fmt_g17(row.ci_hi), fmt_g17(row.mean_mass),
                            fmt_g17(row.mass_ratio), fmt_g17(row.median_tube_sup),
                            std::to_string(row.excluded), std::to_string(row.master_seed)});
    }
    json j;
    if (study.s_exponent) {
        j["sExponent"] = *study.s_exponent;
        j["sResiduals"] = study.s_residuals;
        j["massExponent"] = *study.mass_exponent;
    } else {
        j["sExponent"] = nullptr;
        j["note"] = "fit refused: fewer than 3 R values";
    }
    json conv = json::array();
    for (const ScalingRow& row : study.rows) {
        json c;
        c["R"] = row.R;
        if (row.node_doubling_change) {
            c["nodeDoublingChange"] = *row.node_doubling_change;
            c["flagged"] = *row.node_doubling_change > 0.01;
        }
        conv.push_back(c);
    }
    j["convergence"] = conv;

    const std::string stem = "scaling_" + config_hash(cfg);
    write_file(fs::path(cfg.output.directory) / (stem + ".csv"), csv_to_string(csv));
    write_file(fs::path(cfg.output.directory) / (stem + ".json"), j.dump(2) + "\n");
    write_manifest(cfg, "scaling-study", {stem + ".csv", stem + ".json"}, timer.seconds());
    if (study.s_exponent)
        std::cout << "fitted S exponent " << fmt_g17(*study.s_exponent) << ", mass exponent "
                  << fmt_g17(*study.mass_exponent) << "\n";
    for (const ScalingRow& row : study.rows)
        std::cout << "R=" << row.R << " meanS=" << fmt_g17(row.mean_s)
                  << " mass=" << fmt_g17(row.mean_mass)
                  << " medianTubeSup=" << fmt_g17(row.median_tube_sup) << "\n";
    return 0;
}

int run_tube_sup(const ExperimentConfig& cfg) {
    Timer timer;
    const CellCover cover = build_cover(cfg.cover.R, cfg.cover.d, cfg.cover.geometry);
    const Weight w = sample_weight(cover, cfg.model, cfg.run.master_seed);
    const TubeSupResult res = tube_sup(cover, w, cfg.tube_search);
    json j;
    j["value"] = res.value;
    j["direction"] = {res.argmax.direction.x, res.argmax.direction.y, res.argmax.direction.z};
    j["anchor"] = {res.argmax.anchor.x, res.argmax.anchor.y, res.argmax.anchor.z};
    j["resolution"] = {{"angular", res.angular_resolution},
                       {"offset", res.offset_spacing}};
    j["mass"] = weight_mass(w);
    const std::string name = "tubesup_" + config_hash(cfg) + ".json";
    write_file(fs::path(cfg.output.directory) / name, j.dump(2) + "\n");
    write_manifest(cfg, "tube-sup", {name}, timer.seconds());
    std::cout << "sup_T w(T) = " << fmt_g17(res.value) << "\n";
    return 0;
}

int run_tail_study(const ExperimentConfig& cfg, const std::string& bound) {
    Timer timer;
    TailStudySpec spec = cfg.tail;
    if (!bound.empty()) spec.kind = tail_bound_kind_from_string(bound);
    if (spec.seed == 0) spec.seed = cfg.run.master_seed;
    const TailStudy study = tail_study(spec);

    CsvTable csv;
    csv.header = {"threshold", "empirical", "stderr", "bound"};
    for (const TailRow& row : study.rows)
        csv.rows.push_back({fmt_g17(row.threshold), fmt_g17(row.empirical),
                            fmt_g17(row.stderr_), fmt_g17(row.bound)});
    const std::string name = "tail_" + to_string(study.spec.kind) + "_" + config_hash(cfg) +
                             ".csv";
    write_file(fs::path(cfg.output.directory) / name, csv_to_string(csv));
    write_manifest(cfg, "tail-study", {name}, timer.seconds());

    bool dominated = true;
    for (const TailRow& row : study.rows)
        if (row.bound <= 0.5 && row.empirical > row.bound + 3.0 * row.stderr_)
            dominated = false;
    std::cout << to_string(study.spec.kind) << " tail study: "
              << (dominated ? "dominance holds on every row" : "DOMINANCE VIOLATED") << "\n";
    return 0;
}

int run_maurey_net(const ExperimentConfig& cfg) {
    Timer timer;
    const MaureySpec& ms = cfg.maurey;
    Xoshiro256 vec_rng(derive_seed(cfg.run.master_seed, 0x4d41u));
    std::vector<std::vector<double>> vectors(ms.n, std::vector<double>(ms.dim));
    for (auto& v : vectors) {
        double n2 = 0.0;
        for (auto& c : v) {
            c = vec_rng.uniform(-1.0, 1.0);
            n2 += c * c;
        }
        const double scale = ms.vector_norm / std::sqrt(n2);
        for (auto& c : v) c *= scale;
    }
    const PolytopeSpec spec = make_polytope(vectors);
    const MaureyNet net = maurey_net(spec, ms.eps, ms.mode, cfg.run.master_seed, ms.budget,
                                     ms.net_samples);

    Xoshiro256 hull_rng(derive_seed(cfg.run.master_seed, 0x48554cu));
    std::size_t covered = 0;
    double worst = 0.0;
    for (std::size_t s = 0; s < ms.coverage_samples; ++s) {
        const std::vector<double> x = random_hull_point(spec, hull_rng);
        const double dist = net_distance(net, x);
        worst = std::max(worst, dist);
        if (dist <= ms.eps) ++covered;
    }

    json j;
    j["n"] = ms.n;
    j["dim"] = ms.dim;
    j["K"] = spec.bound_k;
    j["epsilon"] = ms.eps;
    j["depth"] = net.depth;
    j["mode"] = ms.mode == NetMode::enumerated ? "enumerated" : "sampled";
    j["netSize"] = net.points.size();
    j["logNetSize"] = std::log(static_cast<double>(net.points.size()));
    j["logSizeBound"] =
        std::pow(2.0 * spec.bound_k / ms.eps, 2.0) * std::log(2.0 * ms.n + 1.0);
    j["coverage"] = {{"samples", ms.coverage_samples},
                     {"covered", covered},
                     {"worstDistance", worst}};
    const std::string name = "maurey_" + config_hash(cfg) + ".json";
    write_file(fs::path(cfg.output.directory) / name, j.dump(2) + "\n");
    write_manifest(cfg, "maurey-net", {name}, timer.seconds());
    std::cout << "net size " << net.points.size() << ", coverage " << covered << "/"
              << ms.coverage_samples << ", worst distance " << fmt_g17(worst) << "\n";
    return 0;
}

int run_covering_check(const ExperimentConfig& cfg) {
    Timer timer;
    const double R = cfg.cover.R;
    const CellCover cover = build_cover(R, cfg.cover.d, cfg.cover.geometry);
    const QuadratureRule rule =
        build_surface(cfg.surface.kind, cfg.surface.d, surface_nodes(cfg, R));
    const std::vector<CoveringRow> table = covering_check(
        rule, cover, cfg.covering.eps_list, cfg.covering.sample_count, cfg.run.master_seed);
    CsvTable csv;
    csv.header = {"epsilon", "packingSize", "logPacking", "envelope"};
    for (const CoveringRow& row : table)
        csv.rows.push_back({fmt_g17(row.eps), std::to_string(row.packing_size),
                            fmt_g17(row.log_packing), fmt_g17(row.envelope)});
    const std::string name = "covering_" + config_hash(cfg) + ".csv";
    write_file(fs::path(cfg.output.directory) / name, csv_to_string(csv));
    write_manifest(cfg, "covering-check", {name}, timer.seconds());
    for (const CoveringRow& row : table)
        std::cout << "eps=" << row.eps << " packing=" << row.packing_size << " envelope="
                  << fmt_g17(row.envelope) << "\n";
    return 0;
}

// Aggregates scaling CSVs in a run directory into per-claim summaries and
// plot-ready two-column files.
int run_report(const std::string& dir_arg) {
    const fs::path dir = dir_arg;
    if (!fs::is_directory(dir)) {
        std::cerr << "report: not a directory: " << dir << "\n";
        return 2;
    }
    std::vector<fs::path> manifests;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("manifest_", 0) == 0 && entry.path().extension() == ".json")
            manifests.push_back(entry.path());
    }
    std::sort(manifests.begin(), manifests.end());
    if (manifests.empty()) {
        std::cerr << "report: no run manifests in " << dir << "\n";
        return 2;
    }

    std::ostringstream report;
    report << "run report for " << dir.string() << "\n";
    for (const fs::path& mpath : manifests) {
        std::ifstream in(mpath);
        json manifest = json::parse(in);
        const std::string sub = manifest.value("subcommand", "?");
        const std::string hash = manifest.value("configHash", "?");
        report << "\n[" << sub << " " << hash << "] seed "
               << manifest.value("masterSeed", 0ull) << "\n";
        if (sub != "scaling-study") {
            for (const auto& a : manifest.value("artifacts", std::vector<std::string>{}))
                report << "  artifact: " << a << "\n";
            continue;
        }
        // Recompute the desk-scale checks from the CSV itself.
        std::string csv_name;
        for (const auto& a : manifest.value("artifacts", std::vector<std::string>{}))
            if (a.size() > 4 && a.substr(a.size() - 4) == ".csv") csv_name = a;
        if (csv_name.empty()) continue;
        const CsvTable csv = read_csv(dir / csv_name);
        std::vector<double> Rs, means, masses, tube_medians, ratios;
        double lambda = 0.0;
        int d = manifest["config"]["cover"]["d"].get<int>();
        for (const auto& row : csv.rows) {
            Rs.push_back(std::stod(row[0]));
            lambda = std::stod(row[2]);
            means.push_back(std::stod(row[4]));
            masses.push_back(std::stod(row[8]));
            ratios.push_back(std::stod(row[9]));
            tube_medians.push_back(std::stod(row[10]));
        }

        const std::string stem = csv_name.substr(0, csv_name.size() - 4);
        std::ostringstream s_dat, mass_dat, tube_dat;
        for (std::size_t i = 0; i < Rs.size(); ++i) {
            s_dat << fmt_g17(std::log(Rs[i])) << " " << fmt_g17(std::log(means[i])) << "\n";
            mass_dat << fmt_g17(std::log(Rs[i])) << " " << fmt_g17(std::log(masses[i]))
                     << "\n";
            tube_dat << fmt_g17(Rs[i]) << " " << fmt_g17(tube_medians[i]) << "\n";
        }
        write_file(dir / (stem + "_logS.dat"), s_dat.str());
        write_file(dir / (stem + "_logmass.dat"), mass_dat.str());
        write_file(dir / (stem + "_tubesup.dat"), tube_dat.str());

        const double vd = unit_ball_volume(d);
        bool mass_ok = true, tube_ok = true;
        for (std::size_t i = 0; i < Rs.size(); ++i) {
            if (ratios[i] < 0.5 * vd || ratios[i] > 2.0 * vd) mass_ok = false;
            if (tube_medians[i] > 4.0 * std::log(Rs[i])) tube_ok = false;
        }
        report << "  mass ratio in [0.5,2]*v_d at every R: " << (mass_ok ? "PASS" : "FAIL")
               << "\n";
        report << "  median tube sup <= 4 ln R at every R: " << (tube_ok ? "PASS" : "FAIL")
               << "\n";
        if (Rs.size() >= 3) {
            const double alpha = fit_log_exponent(Rs, means);
            const double threshold = 0.4 + lambda + (lambda > 0.0 ? 0.2 : 0.0);
            report << "  fitted S exponent " << fmt_g17(alpha) << " (threshold "
                   << fmt_g17(threshold)
                   << "): " << (alpha <= threshold ? "PASS" : "FAIL") << "\n";
        } else {
            report << "  fitted S exponent: n/a (fewer than 3 R values)\n";
        }
    }

    write_file(dir / "report.txt", report.str());
    std::cout << report.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted extension-operator laboratory"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker pool size (0 = hardware)");

    CliOverrides ov;
    std::string tail_bound;
    std::string report_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", ov.config_path, "JSON config path");
        sub->add_option("--out", ov.out_dir, "output directory");
        sub->add_option("--seed", ov.seed, "master seed");
        sub->add_option("--N", ov.N, "trial count");
        sub->add_option("--R", ov.R, "ball radius");
        sub->add_option("--Rs", ov.Rs, "radii for scaling studies")->delimiter(',');
        sub->add_option("--d", ov.d, "ambient dimension");
        sub->add_option("--kind", ov.kind, "surface kind");
        sub->add_option("--geometry", ov.geometry, "cell geometry (cube|ball)");
        sub->add_option("--model", ov.model, "weight model");
        sub->add_option("--c", ov.c, "selector constant c");
        sub->add_option("--lambda", ov.lambda, "selector exponent lambda");
        sub->add_option("--m", ov.m, "carbery draw count");
        sub->add_option("--M", ov.M, "surface node count (0 = auto)");
    };

    CLI::App* gen = app.add_subcommand("generate-weight", "sample a weight, write JSON");
    CLI::App* mtf = app.add_subcommand("mt-functional", "S(w) for one sampled weight");
    CLI::App* emt = app.add_subcommand("expected-mt", "Monte Carlo estimate of E S(w)");
    CLI::App* scal = app.add_subcommand("scaling-study", "S, mass, tube sup across R");
    CLI::App* tsup = app.add_subcommand("tube-sup", "search sup_T w(T) for one weight");
    CLI::App* tailc = app.add_subcommand("tail-study", "simulated tails vs closed-form bounds");
    CLI::App* net = app.add_subcommand("maurey-net", "empirical-method net + coverage audit");
    CLI::App* cov = app.add_subcommand("covering-check", "seminorm packing numbers");
    CLI::App* rep = app.add_subcommand("report", "aggregate a run directory");
    for (CLI::App* sub : {gen, mtf, emt, scal, tsup, tailc, net, cov}) add_common(sub);
    mtf->add_flag("--dump-gram", ov.dump_gram, "dump the assembled matrix (binary)");
    tailc->add_option("bound", tail_bound, "bennett|selector|chernoff-tube");
    rep->add_option("dir", report_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    set_worker_count(threads);
    try {
        if (rep->parsed()) return run_report(report_dir);
        const ExperimentConfig cfg = resolve_config(ov);
        if (gen->parsed()) return run_generate_weight(cfg);
        if (mtf->parsed()) return run_mt_functional(cfg, ov.dump_gram);
        if (emt->parsed()) return run_expected_mt(cfg);
        if (scal->parsed()) return run_scaling_study(cfg);
        if (tsup->parsed()) return run_tube_sup(cfg);
        if (tailc->parsed()) return run_tail_study(cfg, tail_bound);
        if (net->parsed()) return run_maurey_net(cfg);
        if (cov->parsed()) return run_covering_check(cfg);
        std::cerr << "unknown subcommand\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
