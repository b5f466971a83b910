// Acceptance suite: one line per criterion, PASS/FAIL plus timing. The
// optional argv[1] is the path to the mtlab binary, used by the determinism
// criterion; exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mtlab/chaining.hpp"
#include "mtlab/functional.hpp"
#include "mtlab/io.hpp"
#include "mtlab/parallel.hpp"
#include "mtlab/probbounds.hpp"
#include "../test_helpers.hpp"

using namespace mtlab;
namespace fs = std::filesystem;
using cplx = std::complex<double>;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

std::string g_mtlab_path;

// --------------------------------------------------------------- utilities

Weight selector_at(const CellCover& cover, double c, double lambda, std::uint64_t seed) {
    return sample_selector_weight(cover, c, lambda, seed);
}

double gl_spatial_form(const QuadratureRule& rule, const CellCover& cover, const Weight& w,
                       std::span<const cplx> g) {
    static const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563,
                                   0.3399810435848563, 0.8611363115940526};
    static const double gl_w[4] = {0.3478548451374538, 0.6521451548625461,
                                   0.6521451548625461, 0.3478548451374538};
    const int panels = 16;
    const double h = 1.0 / panels;
    std::vector<double> nodes, weights;
    for (int p = 0; p < panels; ++p)
        for (int q = 0; q < 4; ++q) {
            nodes.push_back(-0.5 + (p + 0.5 * (1.0 + gl_x[q])) * h);
            weights.push_back(0.5 * h * gl_w[q]);
        }
    long double total = 0.0L;
    for (std::size_t s = 0; s < w.support_size(); ++s) {
        const Vec3 c = cover.center(w.indices[s]);
        long double cell = 0.0L;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (std::size_t j = 0; j < nodes.size(); ++j)
                cell += weights[i] * weights[j] *
                        std::norm(testutil::reference_extension(
                            rule, g, {c.x + nodes[i], c.y + nodes[j], 0.0}));
        total += static_cast<long double>(w.multiplicities[s]) * cell;
    }
    return static_cast<double>(total);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ------------------------------------------------------------- criterion 1

Outcome eigen_oracle_equivalence() {
    Xoshiro256 rng(101);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng.below(63);
        const GramMatrix m = testutil::random_psd(n, rng);
        const double dense = testutil::dense_lambda_max(m);
        const MTEstimate est = lambda_max(m, 1e-12, 20000, rng);
        worst = std::max(worst, std::abs(est.value - dense) / dense);
    }
    const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 32);
    const CellCover cover = build_cover(4.0, 2, CellGeometry::cube);
    for (int rep = 0; rep < 10; ++rep) {
        const Weight w = selector_at(cover, 1.0, 0.0, 1000 + rep);
        if (w.support_size() == 0) continue;
        const GramMatrix gram = assemble_gram(rule, cover, w);
        const double dense = testutil::dense_lambda_max(gram);
        Xoshiro256 start(derive_seed(1000 + rep, stream::kStartVec));
        const MTEstimate est = lambda_max(gram, 1e-12, 20000, start);
        worst = std::max(worst, std::abs(est.value - dense) / dense);
    }
    Outcome out;
    out.pass = worst <= 1e-8;
    out.detail = "max relative error " + fmt_g17(worst);
    return out;
}

// ------------------------------------------------------------- criterion 2

Outcome gram_vs_spatial() {
    const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 32);
    const CellCover cover = build_cover(4.0, 2, CellGeometry::cube);
    const Weight w = selector_at(cover, 1.0, 0.0, 2024);
    const GramMatrix gram = assemble_gram(rule, cover, w);
    Xoshiro256 rng(202);
    double worst = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<cplx> g = testutil::random_coefficients(rule.size(), rng);
        const double n = surface_l2_norm(rule, g);
        for (auto& c : g) c /= n;
        std::vector<cplx> t(rule.size());
        for (std::size_t j = 0; j < rule.size(); ++j)
            t[j] = std::sqrt(rule.sigma[j]) * g[j];
        cplx form{0.0, 0.0};
        for (std::size_t j = 0; j < gram.size; ++j)
            for (std::size_t l = 0; l < gram.size; ++l)
                form += t[j] * std::conj(t[l]) * gram.at(j, l);
        const double oracle = gl_spatial_form(rule, cover, w, g);
        worst = std::max(worst, std::abs(form.real() - oracle) / oracle);
    }
    Outcome out;
    out.pass = worst <= 1e-4;
    out.detail = "max relative error " + fmt_g17(worst) + " over 5 densities";
    return out;
}

// ------------------------------------------------------------- criterion 3

Outcome agmon_hormander_scaling() {
    std::vector<double> Rs{8.0, 16.0, 32.0};
    std::vector<double> values, ratios;
    // The full weight has a clustered top of the spectrum (its Rayleigh
    // quotient converges at 1 - O(1e-4) per step), so this experiment runs
    // with a larger iteration budget than the library default.
    const PowerOptions opts{1e-10, 200000};
    for (double R : Rs) {
        const QuadratureRule rule =
            build_surface(SurfaceKind::circle, 2, default_node_count(2, R));
        const CellCover cover = build_cover(R, 2, CellGeometry::cube);
        const MTEstimate est = mt_functional(rule, cover, full_weight(cover), opts, 303);
        values.push_back(est.value);
        ratios.push_back(est.value / R);
    }
    double lo = ratios[0], hi = ratios[0];
    for (double r : ratios) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const double alpha = fit_log_exponent(Rs, values);
    Outcome out;
    out.pass = hi / lo <= 1.5 && alpha >= 0.8 && alpha <= 1.2;
    out.detail = "S/R band factor " + fmt_g17(hi / lo) + ", exponent " + fmt_g17(alpha);
    return out;
}

// ------------------------------------------------------------- criterion 4

Outcome mass_scaling() {
    Outcome out;
    std::ostringstream detail;
    for (double R : {16.0, 32.0, 64.0}) {
        const CellCover cover = build_cover(R, 2, CellGeometry::cube);
        const double delta = 1.0 / R;
        const int N = 200;
        double sum = 0.0;
        for (int i = 0; i < N; ++i)
            sum += weight_mass(
                selector_at(cover, 1.0, 0.0,
                            derive_seed(404, static_cast<std::uint64_t>(i + 1000 * R))));
        const double mean = sum / N;
        const double count = static_cast<double>(cover.size());
        const double analytic = delta * count * cover.cell_volume;
        const double se =
            std::sqrt(count * delta * (1.0 - delta)) * cover.cell_volume / std::sqrt(N);
        const double vratio = mean / (unit_ball_volume(2) * R);
        const bool band = vratio >= 0.5 && vratio <= 2.0;
        const bool close = std::abs(mean - analytic) <= 4.0 * se;
        out.pass = out.pass && band && close;
        detail << "R=" << R << " mean/(v2 R)=" << fmt_g17(vratio) << " dev/se="
               << fmt_g17(std::abs(mean - analytic) / se) << "; ";
    }
    out.detail = detail.str();
    return out;
}

// ------------------------------------------------------------- criterion 5

Outcome tube_sup_scaling() {
    Outcome out;
    std::ostringstream detail;
    std::vector<double> medians;
    for (double R : {16.0, 32.0, 64.0}) {
        const CellCover cover = build_cover(R, 2, CellGeometry::cube);
        std::vector<double> sups(32);
        parallel_for(32, [&](std::size_t i) {
            const Weight w = selector_at(
                cover, 1.0, 0.0, derive_seed(505, static_cast<std::uint64_t>(i + 1000 * R)));
            sups[i] = tube_sup(cover, w).value;
        });
        std::sort(sups.begin(), sups.end());
        const double median = 0.5 * (sups[15] + sups[16]);
        medians.push_back(median);
        const bool ok = median <= 4.0 * std::log(R);
        out.pass = out.pass && ok;
        detail << "R=" << R << " median=" << fmt_g17(median) << " bound="
               << fmt_g17(4.0 * std::log(R)) << "; ";
    }
    for (std::size_t i = 1; i < medians.size(); ++i)
        out.pass = out.pass && medians[i] <= 2.0 * medians[i - 1];
    out.detail = detail.str();
    return out;
}

// ------------------------------------------------------------- criterion 6

Outcome functional_exponent() {
    ScalingStudySpec spec;
    spec.Rs = {16.0, 32.0, 64.0};
    spec.model.tag = WeightModel::selector;
    spec.N = 32;
    spec.master_seed = 606;
    spec.convergence_spot_check = false;
    const ScalingStudy study = scaling_study(spec);

    // Quadrature-convergence spot check at R = 16.
    const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 256);
    const QuadratureRule fine = build_surface(SurfaceKind::circle, 2, 512);
    const CellCover cover = build_cover(16.0, 2, CellGeometry::cube);
    const Weight w = selector_at(cover, 1.0, 0.0, 616);
    const double coarse_v = mt_functional(rule, cover, w, {}, 616).value;
    const double fine_v = mt_functional(fine, cover, w, {}, 616).value;
    const double change = std::abs(fine_v - coarse_v) / fine_v;

    Outcome out;
    const double alpha = study.s_exponent.value_or(99.0);
    int excluded = 0;
    for (const ScalingRow& row : study.rows) excluded += row.excluded;
    out.pass = alpha <= 0.4 && change <= 0.01;
    out.detail = "fitted exponent " + fmt_g17(alpha) + ", R=16 node-doubling change " +
                 fmt_g17(change) + ", excluded trials " + std::to_string(excluded);
    return out;
}

// ------------------------------------------------------------- criterion 7

Outcome lambda_generalization() {
    ScalingStudySpec spec;
    spec.Rs = {16.0, 32.0, 64.0};
    spec.model.tag = WeightModel::selector;
    spec.model.lambda = 0.5;
    spec.N = 32;
    spec.master_seed = 707;
    spec.convergence_spot_check = false;
    const ScalingStudy study = scaling_study(spec);
    const double mass_exp = study.mass_exponent.value_or(99.0);
    const double s_exp = study.s_exponent.value_or(99.0);
    Outcome out;
    out.pass = mass_exp >= 1.3 && mass_exp <= 1.7 && s_exp <= 1.1;
    out.detail = "mass exponent " + fmt_g17(mass_exp) + ", S exponent " + fmt_g17(s_exp);
    return out;
}

// ------------------------------------------------------------- criterion 8

Outcome carbery_comparison() {
    const double R = 32.0;
    const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 512);
    const CellCover cover = build_cover(R, 2, CellGeometry::cube);

    ModelSpec carbery;
    carbery.tag = WeightModel::carbery_with_replacement;
    carbery.m = static_cast<std::uint64_t>(R);  // R^(d-1)
    const MonteCarloSummary mc_carbery = expected_mt(rule, cover, carbery, 32, 808);

    // Selector with matched expected mass: delta * count = m.
    ModelSpec selector;
    selector.tag = WeightModel::selector;
    selector.c = R * static_cast<double>(carbery.m) / static_cast<double>(cover.size());
    const MonteCarloSummary mc_selector = expected_mt(rule, cover, selector, 32, 809);

    const double ratio = mc_carbery.mean / mc_selector.mean;
    Outcome out;
    out.pass = ratio <= 2.0 && ratio >= 0.5 && mc_carbery.excluded_trials.empty() &&
               mc_selector.excluded_trials.empty();
    out.detail = "mean S carbery " + fmt_g17(mc_carbery.mean) + " vs selector " +
                 fmt_g17(mc_selector.mean) + ", ratio " + fmt_g17(ratio);
    return out;
}

// ------------------------------------------------------------- criterion 9

Outcome tail_dominance() {
    Outcome out;
    std::ostringstream detail;
    std::vector<TailStudySpec> specs(3);
    specs[0].kind = TailBoundKind::bennett;
    specs[0].n = 50;
    specs[0].delta = 0.1;
    specs[0].seed = 909;
    specs[1].kind = TailBoundKind::selector;
    specs[1].n = 200;
    specs[1].delta = 1.0 / 32.0;
    specs[1].thresholds = {16.0, 24.0, 32.0};
    specs[1].seed = 910;
    specs[2].kind = TailBoundKind::chernoff_tube;
    specs[2].R = 64.0;
    specs[2].delta = 1.0 / 64.0;
    specs[2].seed = 911;
    for (TailStudySpec& spec : specs) {
        spec.samples = 100000;
        const TailStudy study = tail_study(spec);
        int checked = 0;
        for (const TailRow& row : study.rows) {
            if (row.bound > 0.5) continue;
            ++checked;
            if (row.empirical > row.bound + 3.0 * row.stderr_) out.pass = false;
        }
        detail << to_string(spec.kind) << " rows checked " << checked << "; ";
    }
    // Boundary exactness at dyadic parameters where the log argument is an
    // exact 1.0.
    const std::vector<double> ones(64, 1.0);
    if (bennett_bound(ones, 0.25, 16.0) != 1.0) out.pass = false;
    if (selector_tail_bound(128, 1.0 / 32.0, 8.0) != 1.0) out.pass = false;
    detail << "boundary bounds exact";
    out.detail = detail.str();
    return out;
}

// ------------------------------------------------------------ criterion 10

Outcome maurey_coverage() {
    Xoshiro256 vec_rng(1010);
    std::vector<std::vector<double>> vectors(8, std::vector<double>(16));
    for (auto& v : vectors) {
        double n2 = 0.0;
        for (auto& c : v) {
            c = vec_rng.uniform(-1.0, 1.0);
            n2 += c * c;
        }
        for (auto& c : v) c *= 0.5 / std::sqrt(n2);
    }
    const PolytopeSpec spec = make_polytope(vectors);
    const double eps = 0.5;
    const MaureyNet net = maurey_net(spec, eps, NetMode::enumerated, 0);

    Xoshiro256 hull_rng(1011);
    int covered = 0;
    for (int s = 0; s < 200; ++s) {
        const std::vector<double> x = random_hull_point(spec, hull_rng);
        if (net_distance(net, x) <= eps) ++covered;
    }
    const double log_net = std::log(static_cast<double>(net.points.size()));
    const double bound = std::pow(2.0 * spec.bound_k / eps, 2.0) * std::log(17.0);
    Outcome out;
    out.pass = covered == 200 && log_net <= bound;
    out.detail = "covered " + std::to_string(covered) + "/200, log|net| " +
                 fmt_g17(log_net) + " <= " + fmt_g17(bound);
    return out;
}

// ------------------------------------------------------------ criterion 11

Outcome determinism() {
    if (g_mtlab_path.empty()) {
        Outcome out;
        out.pass = false;
        out.detail = "mtlab binary path not supplied";
        return out;
    }
    const fs::path base = fs::temp_directory_path() / "mtlab_determinism";
    fs::remove_all(base);
    const std::vector<std::string> commands = {
        "scaling-study --Rs 4,6,8 --d 2 --model selector --N 4 --seed 9 --M 64",
        "expected-mt --R 8 --d 2 --model selector --N 4 --seed 9",
        "tail-study bennett --seed 9",
        "covering-check --R 8 --d 2 --M 64 --seed 9",
    };
    for (int run = 0; run < 3; ++run) {
        const int threads = run == 2 ? 4 : 1;
        const fs::path dir = base / ("run" + std::to_string(run));
        for (const std::string& cmd : commands) {
            const std::string full = g_mtlab_path + " --threads " + std::to_string(threads) +
                                     " " + cmd + " --out " + dir.string() + " >/dev/null";
            if (std::system(full.c_str()) != 0) {
                Outcome out;
                out.pass = false;
                out.detail = "command failed: " + full;
                return out;
            }
        }
    }
    // Byte-compare every CSV/JSON artifact (manifests carry wall time and are
    // not artifacts).
    Outcome out;
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(base / "run0")) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("manifest_", 0) == 0) continue;
        const std::string a = read_file(entry.path());
        const std::string b = read_file(base / "run1" / name);
        const std::string c = read_file(base / "run2" / name);
        if (a.empty() || a != b || a != c) {
            out.pass = false;
            out.detail += name + " differs; ";
        }
        ++compared;
    }
    out.pass = out.pass && compared >= 6;
    out.detail +=
        std::to_string(compared) + " artifacts compared across reruns and pools {1,4}";
    return out;
}

// ------------------------------------------------------------ criterion 12

Outcome invariant_suite() {
    Outcome out;
    std::ostringstream detail;

    // PSD floor on assembled Grams.
    {
        const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 24);
        const CellCover cover = build_cover(5.0, 2, CellGeometry::cube);
        for (int rep = 0; rep < 5; ++rep) {
            const Weight w = selector_at(cover, 1.0, 0.0, 1200 + rep);
            const GramMatrix gram = assemble_gram(rule, cover, w);
            const Eigen::VectorXd ev = testutil::dense_eigenvalues(gram);
            if (ev(0) < -1e-9 * ev(ev.size() - 1)) {
                out.pass = false;
                detail << "PSD floor violated; ";
            }
        }
    }
    // Seminorm subadditivity.
    {
        const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 32);
        const CellCover cover = build_cover(4.0, 2, CellGeometry::cube);
        Xoshiro256 rng(1201);
        for (int rep = 0; rep < 10; ++rep) {
            const auto g1 = testutil::random_coefficients(rule.size(), rng);
            const auto g2 = testutil::random_coefficients(rule.size(), rng);
            std::vector<cplx> sum(rule.size());
            for (std::size_t j = 0; j < rule.size(); ++j) sum[j] = g1[j] + g2[j];
            const double lhs = seminorm_tilde(rule, cover, sum);
            const double rhs =
                seminorm_tilde(rule, cover, g1) + seminorm_tilde(rule, cover, g2);
            if (lhs > rhs * (1.0 + 1e-12)) {
                out.pass = false;
                detail << "subadditivity violated; ";
            }
        }
    }
    // Tube monotonicity under adding a cell.
    {
        const CellCover cover = build_cover(8.0, 2, CellGeometry::cube);
        Xoshiro256 rng(1202);
        Weight w;
        w.model = WeightModel::custom;
        w.R = cover.R;
        w.dim = cover.dim;
        w.geometry = cover.geometry;
        w.cell_volume = cover.cell_volume;
        for (std::uint32_t k = 0; k < cover.size(); ++k)
            if (rng.bernoulli(0.1)) {
                w.indices.push_back(k);
                w.multiplicities.push_back(1);
            }
        const double base = tube_sup(cover, w).value;
        Weight more = w;
        for (std::uint32_t k = 0; k < cover.size(); ++k) {
            if (std::find(more.indices.begin(), more.indices.end(), k) ==
                more.indices.end()) {
                const auto pos =
                    std::lower_bound(more.indices.begin(), more.indices.end(), k);
                more.multiplicities.insert(
                    more.multiplicities.begin() + (pos - more.indices.begin()), 1);
                more.indices.insert(pos, k);
                break;
            }
        }
        if (tube_sup(cover, more).value < base - 1e-12) {
            out.pass = false;
            detail << "tube monotonicity violated; ";
        }
    }
    // Packing separation.
    {
        const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 64);
        const CellCover cover = build_cover(8.0, 2, CellGeometry::cube);
        const auto table = covering_check(rule, cover, {0.07}, 40, 1203);
        const auto& packing = table[0].packing;
        for (std::size_t i = 0; i < packing.size(); ++i) {
            for (std::size_t j = i + 1; j < packing.size(); ++j) {
                const auto gi = covering_sample(rule, 1203, packing[i]);
                const auto gj = covering_sample(rule, 1203, packing[j]);
                std::vector<cplx> diff(gi.size());
                for (std::size_t t = 0; t < gi.size(); ++t) diff[t] = gi[t] - gj[t];
                if (seminorm_tilde(rule, cover, diff) <= 0.07) {
                    out.pass = false;
                    detail << "packing separation violated; ";
                }
            }
        }
    }
    // Scale invariance of the maximizer.
    {
        const QuadratureRule rule = build_surface(SurfaceKind::circle, 2, 32);
        const CellCover cover = build_cover(6.0, 2, CellGeometry::cube);
        const Weight w = selector_at(cover, 1.0, 0.0, 1204);
        Weight scaled = w;
        for (auto& m : scaled.multiplicities) m *= 3;
        const MTEstimate a = mt_functional(rule, cover, w, {}, 1204);
        const MTEstimate b = mt_functional(rule, cover, scaled, {}, 1204);
        cplx inner{0.0, 0.0};
        for (std::size_t j = 0; j < a.maximizer.size(); ++j)
            inner += std::conj(a.maximizer[j]) * b.maximizer[j];
        if (std::abs(b.value - 3.0 * a.value) > 1e-8 * b.value ||
            std::abs(inner) < 1.0 - 1e-6) {
            out.pass = false;
            detail << "maximizer scale invariance violated; ";
        }
    }
    // Bound monotonicity on dense grids.
    {
        const std::vector<double> a(50, 1.0);
        double prev = 1e9;
        for (double t = 5.0; t <= 40.0; t += 0.1) {
            const double b = bennett_bound(a, 0.1, t);
            if (b > prev * (1.0 + 1e-15)) {
                out.pass = false;
                detail << "bennett monotonicity violated; ";
                break;
            }
            prev = b;
        }
        prev = 1e9;
        for (double u = 12.5; u <= 80.0; u += 0.1) {
            const double b = selector_tail_bound(200, 1.0 / 32.0, u);
            if (b > prev * (1.0 + 1e-15)) {
                out.pass = false;
                detail << "selector monotonicity violated; ";
                break;
            }
            prev = b;
        }
    }
    detail << "six property families checked";
    out.detail = detail.str();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_mtlab_path = argv[1];

    std::vector<Check> checks = {
        {1, "eigen-oracle equivalence", 10.0, eigen_oracle_equivalence},
        {2, "gram vs spatial quadrature", 30.0, gram_vs_spatial},
        {3, "full-weight linear scaling", 300.0, agmon_hormander_scaling},
        {4, "selector mass ~ R^(d-1)", 60.0, mass_scaling},
        {5, "median tube sup <= 4 ln R", 600.0, tube_sup_scaling},
        {6, "mean S exponent <= 0.4", 1800.0, functional_exponent},
        {7, "lambda = 0.5 generalization", 1800.0, lambda_generalization},
        {8, "carbery vs selector within 2x", 900.0, carbery_comparison},
        {9, "tail dominance + exact boundaries", 120.0, tail_dominance},
        {10, "maurey net coverage", 60.0, maurey_coverage},
        {11, "byte-identical artifacts", 600.0, determinism},
        {12, "invariant property suite", 600.0, invariant_suite},
    };

    int failures = 0;
    for (const Check& check : checks) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = check.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = seconds < check.limit_seconds;
        const bool pass = outcome.pass && in_time;
        if (!pass) ++failures;
        std::printf("[%2d] %-4s %7.1fs  %s: %s%s\n", check.id, pass ? "PASS" : "FAIL",
                    seconds, check.name.c_str(), outcome.detail.c_str(),
                    in_time ? "" : " [over time limit]");
        std::fflush(stdout);
    }
    std::printf("%d/12 criteria passed\n", 12 - failures);
    return failures;
}
