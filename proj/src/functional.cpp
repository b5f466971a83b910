#include "mtlab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtlab/errors.hpp"
#include "mtlab/parallel.hpp"
#include "mtlab/rng.hpp"

namespace mtlab {

namespace {

using cvec = std::vector<std::complex<double>>;

void matvec(const GramMatrix& m, const cvec& v, cvec& out) {
    const std::size_t n = m.size;
    parallel_for(n, [&](std::size_t j) {
        std::complex<double> acc{0.0, 0.0};
        const std::complex<double>* row = m.a.data() + j * n;
        for (std::size_t l = 0; l < n; ++l) acc += row[l] * v[l];
        out[j] = acc;
    });
}

double vnorm(const cvec& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

MTEstimate lambda_max(const GramMatrix& matrix, double tol, int max_iter, Xoshiro256& rng) {
    if (tol <= 0.0) throw ConfigError("lambda_max: tol must be positive");
    if (max_iter < 1) throw ConfigError("lambda_max: maxIter must be >= 1");
    const std::size_t n = matrix.size;

    MTEstimate est;
    est.nodes = n;
    if (n == 0) return est;

    cvec v(n), av(n);
    for (auto& c : v) c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    double nv = vnorm(v);
    for (auto& c : v) c /= nv;

    double lambda = 0.0;
    double prev_change = 1.0;
    double prev_residual = std::numeric_limits<double>::infinity();
    bool rayleigh_settled = false;
    for (int it = 1; it <= max_iter; ++it) {
        matvec(matrix, v, av);
        const double norm_av = vnorm(av);
        double rayleigh = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            rayleigh += (std::conj(v[j]) * av[j]).real();

        if (norm_av <= 1e-300) {
            // v is (numerically) in the kernel; for PSD matrices this means
            // the top eigenvalue is 0 for this start vector's span.
            est.value = 0.0;
            est.maximizer = v;
            est.iterations = it;
            est.residual = 0.0;
            return est;
        }

        double residual2 = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            residual2 += std::norm(av[j] - rayleigh * v[j]);
        const double residual = std::sqrt(residual2);

        const double scale = std::max(std::abs(rayleigh), 1e-300);
        const double change = std::abs(rayleigh - lambda) / scale;
        lambda = rayleigh;

        if (change < tol && prev_change < tol) rayleigh_settled = true;
        const bool residual_done = residual <= tol * scale;
        // Once the Rayleigh quotient is flat, keep polishing only while the
        // residual still makes headway (a clustered top of the spectrum makes
        // it plateau well above tol*value).
        const bool residual_stalled = residual >= 0.99 * prev_residual;
        if (rayleigh_settled && (residual_done || residual_stalled)) {
            est.value = lambda;
            est.maximizer = v;
            est.iterations = it;
            est.residual = residual;
            return est;
        }
        prev_change = change;
        prev_residual = residual;

        for (std::size_t j = 0; j < n; ++j) v[j] = av[j] / norm_av;
    }

    est.value = lambda;
    est.maximizer = v;
    est.iterations = max_iter;
    est.residual = prev_residual;
    throw ConvergenceError("lambda_max: no convergence within " + std::to_string(max_iter) +
                               " iterations",
                           est);
}

MTEstimate mt_functional(const QuadratureRule& rule, const CellCover& cover,
                         const Weight& weight, const PowerOptions& opts,
                         std::uint64_t seed) {
    const GramMatrix gram = assemble_gram(rule, cover, weight);
    Xoshiro256 rng(derive_seed(seed, stream::kStartVec));
    return lambda_max(gram, opts.tol, opts.max_iter, rng);
}

MonteCarloSummary expected_mt(const QuadratureRule& rule, const CellCover& cover,
                              const ModelSpec& model, int N, std::uint64_t master_seed,
                              const PowerOptions& opts) {
    if (N < 1) throw ConfigError("expected_mt: N must be >= 1");
    MonteCarloSummary summary;
    summary.trials = N;
    summary.model = model;
    summary.seeds.resize(N);
    std::vector<double> values(N, 0.0);
    std::vector<char> ok(N, 0);
    for (int i = 0; i < N; ++i) summary.seeds[i] = derive_seed(master_seed, i);

    parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
        const Weight w = sample_weight(cover, model, summary.seeds[i]);
        try {
            const MTEstimate est = mt_functional(rule, cover, w, opts, summary.seeds[i]);
            values[i] = est.value;
            ok[i] = 1;
        } catch (const ConvergenceError&) {
            ok[i] = 0;
        }
    });

    for (int i = 0; i < N; ++i) {
        if (ok[i])
            summary.values.push_back(values[i]);
        else
            summary.excluded_trials.push_back(i);
    }
    const std::size_t n = summary.values.size();
    if (n > 0) {
        summary.mean = std::accumulate(summary.values.begin(), summary.values.end(), 0.0) /
                       static_cast<double>(n);
        double ss = 0.0;
        for (double v : summary.values) ss += (v - summary.mean) * (v - summary.mean);
        summary.stddev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
        const double half = 1.959963984540054 * summary.stddev / std::sqrt(static_cast<double>(n));
        summary.ci_lo = summary.mean - half;
        summary.ci_hi = summary.mean + half;
    }
    return summary;
}

double fit_log_exponent(const std::vector<double>& x, const std::vector<double>& y,
                        std::vector<double>* residuals) {
    if (x.size() != y.size() || x.size() < 2)
        throw ConfigError("fit_log_exponent: need matching x/y with >= 2 points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double dn = static_cast<double>(n);
    const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / dn;
    if (residuals) {
        residuals->resize(n);
        for (std::size_t i = 0; i < n; ++i)
            (*residuals)[i] = ly[i] - (intercept + slope * lx[i]);
    }
    return slope;
}

ScalingStudy scaling_study(const ScalingStudySpec& spec) {
    if (spec.Rs.empty()) throw ConfigError("scaling_study: empty R list");
    for (std::size_t i = 0; i < spec.Rs.size(); ++i) {
        if (spec.Rs[i] < 4.0) throw ConfigError("scaling_study: every R must be >= 4");
        if (i > 0 && spec.Rs[i] <= spec.Rs[i - 1])
            throw ConfigError("scaling_study: R values must be increasing");
    }

    ScalingStudy study;
    for (std::size_t ri = 0; ri < spec.Rs.size(); ++ri) {
        const double R = spec.Rs[ri];
        const int M = spec.nodes_per_R > 0 ? spec.nodes_per_R
                                           : default_node_count(spec.d, R);
        const QuadratureRule rule = build_surface(spec.kind, spec.d, M);
        const CellCover cover = build_cover(R, spec.d, spec.geometry);
        const std::uint64_t r_seed = derive_seed(spec.master_seed, 0x52000000ull + ri);

        ScalingRow row;
        row.R = R;
        row.model = to_string(spec.model.tag);
        row.lambda = spec.model.lambda;
        row.N = spec.N;
        row.master_seed = spec.master_seed;

        const MonteCarloSummary mc = expected_mt(rule, cover, spec.model, spec.N, r_seed,
                                                 spec.power);
        row.mean_s = mc.mean;
        row.std_s = mc.stddev;
        row.ci_lo = mc.ci_lo;
        row.ci_hi = mc.ci_hi;
        row.excluded = static_cast<int>(mc.excluded_trials.size());

        // Mass and tube statistics over the same weight draws.
        std::vector<double> masses(spec.N), tube_sups(spec.N);
        TubeSearchSpec tube_spec = spec.tube_search;
        parallel_for(static_cast<std::size_t>(spec.N), [&](std::size_t i) {
            const Weight w = sample_weight(cover, spec.model, mc.seeds[i]);
            masses[i] = weight_mass(w);
            tube_sups[i] = tube_sup(cover, w, tube_spec).value;
        });
        row.mean_mass = std::accumulate(masses.begin(), masses.end(), 0.0) /
                        static_cast<double>(spec.N);
        row.mass_ratio =
            row.mean_mass / std::pow(R, spec.d - 1 + spec.model.lambda);
        row.median_tube_sup = median_of(tube_sups);

        if (spec.convergence_spot_check) {
            // One deterministic draw re-evaluated with doubled node count.
            const Weight w = sample_weight(cover, spec.model, mc.seeds[0]);
            try {
                const MTEstimate coarse =
                    mt_functional(rule, cover, w, spec.power, mc.seeds[0]);
                const QuadratureRule fine = build_surface(spec.kind, spec.d, 2 * M);
                const MTEstimate refined =
                    mt_functional(fine, cover, w, spec.power, mc.seeds[0]);
                if (refined.value > 0.0)
                    row.node_doubling_change =
                        std::abs(refined.value - coarse.value) / refined.value;
                else
                    row.node_doubling_change = 0.0;
            } catch (const ConvergenceError&) {
                // leave the flag unset; the row still reports the study
            }
        }
        study.rows.push_back(std::move(row));
    }

    if (spec.Rs.size() >= 3) {
        std::vector<double> rs, means, masses;
        for (const ScalingRow& row : study.rows) {
            rs.push_back(row.R);
            means.push_back(row.mean_s);
            masses.push_back(row.mean_mass);
        }
        study.s_exponent = fit_log_exponent(rs, means, &study.s_residuals);
        study.mass_exponent = fit_log_exponent(rs, masses);
    }
    return study;
}

}  // namespace mtlab
