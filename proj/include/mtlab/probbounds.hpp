#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mtlab {

// Closed-form large-deviation bound for sums sum_k a_k Z_k of bounded,
// centered variables with E Z^2 <= delta:
//   P(sum >= t) <= exp(-(t/||a||_inf) * log(t ||a||_inf / (delta ||a||_2^2))).
// Values above 1 are returned as-is (vacuous but valid).
double bennett_bound(std::span<const double> a, double delta, double t);

// Specialization to selector sums over an index set I, valid for
// u >= 2*delta*card(I):
//   P(sum_{k in I} delta_k >= u) <= exp(-(u/8) * log(u / (2*delta*card(I)))).
double selector_tail_bound(std::uint64_t card_i, double delta, double u);

enum class TailBoundKind { bennett, selector, chernoff_tube };

TailBoundKind tail_bound_kind_from_string(const std::string& s);
std::string to_string(TailBoundKind k);

struct TailStudySpec {
    TailBoundKind kind = TailBoundKind::bennett;
    // bennett: n terms a_k = 1, variables delta_k - delta.
    // selector: card_i terms, variables delta_k.
    // chernoff_tube: round(R) terms (the cells along one tube), variables delta_k.
    std::uint64_t n = 50;
    double delta = 0.1;
    double R = 64.0;           // chernoff_tube only
    double chernoff_c = 0.0;   // 0 = the pinned default e * R * delta
    std::vector<double> thresholds;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 0;
};

struct TailRow {
    double threshold = 0.0;
    double empirical = 0.0;
    double stderr_ = 0.0;  // binomial standard error of the frequency
    double bound = 0.0;
};

struct TailStudy {
    TailStudySpec spec;
    std::vector<TailRow> rows;
};

// Simulates the named sum and tabulates empirical exceedance frequencies next
// to the analytic bound for each threshold.
TailStudy tail_study(const TailStudySpec& spec);

// A default threshold grid per bound kind, used when the spec leaves it empty.
std::vector<double> default_thresholds(const TailStudySpec& spec);

}  // namespace mtlab
