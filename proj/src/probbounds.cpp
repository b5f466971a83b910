#include "mtlab/probbounds.hpp"

#include <algorithm>
#include <cmath>

#include "mtlab/errors.hpp"
#include "mtlab/parallel.hpp"
#include "mtlab/rng.hpp"

namespace mtlab {

double bennett_bound(std::span<const double> a, double delta, double t) {
    if (delta <= 0.0 || delta > 1.0) throw ConfigError("bennett_bound: need 0 < delta <= 1");
    if (t <= 0.0) throw ConfigError("bennett_bound: need t > 0");
    double a_inf = 0.0, a_22 = 0.0;
    for (double v : a) {
        a_inf = std::max(a_inf, std::abs(v));
        a_22 += v * v;
    }
    if (a_inf == 0.0) throw ConfigError("bennett_bound: a must be nonzero");
    return std::exp(-(t / a_inf) * std::log(t * a_inf / (delta * a_22)));
}

double selector_tail_bound(std::uint64_t card_i, double delta, double u) {
    if (card_i < 1) throw ConfigError("selector_tail_bound: need card(I) >= 1");
    if (delta <= 0.0 || delta > 1.0)
        throw ConfigError("selector_tail_bound: need 0 < delta <= 1");
    const double floor_u = 2.0 * delta * static_cast<double>(card_i);
    if (u < floor_u)
        throw DomainError("selector_tail_bound: u = " + std::to_string(u) +
                          " below validity floor 2*delta*card(I) = " + std::to_string(floor_u));
    return std::exp(-(u / 8.0) * std::log(u / floor_u));
}

TailBoundKind tail_bound_kind_from_string(const std::string& s) {
    if (s == "bennett") return TailBoundKind::bennett;
    if (s == "selector") return TailBoundKind::selector;
    if (s == "chernoff-tube") return TailBoundKind::chernoff_tube;
    throw ConfigError("unknown tail bound: " + s);
}

std::string to_string(TailBoundKind k) {
    switch (k) {
        case TailBoundKind::bennett: return "bennett";
        case TailBoundKind::selector: return "selector";
        case TailBoundKind::chernoff_tube: return "chernoff-tube";
    }
    return "?";
}

std::vector<double> default_thresholds(const TailStudySpec& spec) {
    switch (spec.kind) {
        case TailBoundKind::bennett: {
            // From the vacuous boundary t = delta*n upward.
            const double base = spec.delta * static_cast<double>(spec.n);
            return {base, base + 2, base + 4, base + 6, base + 8, base + 10};
        }
        case TailBoundKind::selector: {
            const double base = 2.0 * spec.delta * static_cast<double>(spec.n);
            return {base, base + 4, base + 8, base + 12, base + 16};
        }
        case TailBoundKind::chernoff_tube: {
            const double lnr = std::log(spec.R);
            return {2.0, 3.0, lnr, 6.0, 8.0};
        }
    }
    return {};
}

TailStudy tail_study(const TailStudySpec& spec_in) {
    TailStudySpec spec = spec_in;
    if (spec.thresholds.empty()) spec.thresholds = default_thresholds(spec);
    if (!std::is_sorted(spec.thresholds.begin(), spec.thresholds.end()))
        throw ConfigError("tail_study: thresholds must be increasing");
    if (spec.samples < 1) throw ConfigError("tail_study: need samples >= 1");

    std::uint64_t terms = spec.n;
    double delta = spec.delta;
    bool centered = false;
    bool strict = false;  // exceedance comparator: > for the tube count, >= otherwise
    switch (spec.kind) {
        case TailBoundKind::bennett:
            centered = true;
            break;
        case TailBoundKind::selector:
            break;
        case TailBoundKind::chernoff_tube:
            terms = static_cast<std::uint64_t>(std::llround(spec.R));
            strict = true;
            break;
    }
    if (delta < 0.0 || delta > 1.0) throw ConfigError("tail_study: need 0 <= delta <= 1");

    // Batched simulation with counter-split seeds; counts are exact integers,
    // so the reduction is order independent.
    const std::uint64_t batch = 4096;
    const std::uint64_t nbatches = (spec.samples + batch - 1) / batch;
    const std::size_t nt = spec.thresholds.size();
    std::vector<std::vector<std::uint64_t>> batch_counts(nbatches,
                                                         std::vector<std::uint64_t>(nt, 0));
    parallel_for(nbatches, [&](std::size_t b) {
        Xoshiro256 rng(derive_seed(spec.seed, stream::kTail + (b << 8)));
        const std::uint64_t lo = b * batch;
        const std::uint64_t hi = std::min(spec.samples, lo + batch);
        auto& counts = batch_counts[b];
        for (std::uint64_t s = lo; s < hi; ++s) {
            std::uint64_t hits = 0;
            for (std::uint64_t k = 0; k < terms; ++k) hits += rng.bernoulli(delta) ? 1 : 0;
            const double sum = centered
                                   ? static_cast<double>(hits) - delta * static_cast<double>(terms)
                                   : static_cast<double>(hits);
            for (std::size_t i = 0; i < nt; ++i) {
                const double t = spec.thresholds[i];
                if (strict ? (sum > t) : (sum >= t)) ++counts[i];
            }
        }
    });

    TailStudy study;
    study.spec = spec;
    const double nsamp = static_cast<double>(spec.samples);
    for (std::size_t i = 0; i < nt; ++i) {
        std::uint64_t total = 0;
        for (const auto& counts : batch_counts) total += counts[i];
        TailRow row;
        row.threshold = spec.thresholds[i];
        row.empirical = static_cast<double>(total) / nsamp;
        row.stderr_ = std::sqrt(row.empirical * (1.0 - row.empirical) / nsamp);
        switch (spec.kind) {
            case TailBoundKind::bennett: {
                const std::vector<double> ones(spec.n, 1.0);
                row.bound = bennett_bound(ones, delta, row.threshold);
                break;
            }
            case TailBoundKind::selector:
                row.bound = selector_tail_bound(spec.n, delta, row.threshold);
                break;
            case TailBoundKind::chernoff_tube: {
                const double c = spec.chernoff_c > 0.0
                                     ? spec.chernoff_c
                                     : std::exp(1.0) * spec.R * delta;
                row.bound = std::pow(c / row.threshold, row.threshold);
                break;
            }
        }
        study.rows.push_back(row);
    }
    return study;
}

}  // namespace mtlab
