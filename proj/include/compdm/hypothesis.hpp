#pragma once

// Pairwise comparison of criteria importance across a group of DMs, on the
// log-ratios ln(W_ki / W_kj). Three tools:
//
//  * signed_rank_summary: the Wilcoxon-type rank statistics R+, R-, T.
//  * bayesian_signed_rank: Monte Carlo posterior P(pseudo-median > 0) under a
//    Dirichlet process with one prior pseudo-observation at zero.
//  * sign_test: beta-binomial posterior P(p > 1/2) from counts of DMs
//    favouring each criterion.
//
// credal_ranking runs one of the two Bayesian tests on every pair.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "compdm/composition.hpp"
#include "compdm/detail/numeric.hpp"

namespace compdm {

struct SignedRankSummary {
    /// Log-ratio ln(W_ki / W_kj) per DM.
    std::vector<double> log_ratios;
    /// Signed rank per DM; 0 for dropped (zero) log-ratios.
    std::vector<double> ranks;
    double r_plus = 0.0;
    double r_minus = 0.0;
    double t_stat = 0.0;
    std::size_t dropped = 0;
};

/// Ranks |ln(W_ki / W_kj)| with tied magnitudes sharing their average rank.
/// Zero log-ratios are dropped before ranking.
inline SignedRankSummary signed_rank_summary(const PriorityMatrix& W, std::size_t i, std::size_t j) {
    const std::size_t n = W.criteria();
    if (i >= n || j >= n) throw DimensionMismatch(n, std::max(i, j) + 1);
    if (i == j) throw InputError("signed-rank summary needs two distinct criteria");

    SignedRankSummary s;
    s.log_ratios = W.log_ratio_column(i, j);
    s.ranks.assign(s.log_ratios.size(), 0.0);

    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < s.log_ratios.size(); ++k) {
        if (s.log_ratios[k] == 0.0) ++s.dropped;
        else order.push_back(k);
    }
    if (order.empty()) throw AllZeroRatios(i, j);

    auto mag = [&](std::size_t k) { return std::abs(s.log_ratios[k]); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mag(a) < mag(b); });

    auto tied = [&](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(a, b)); };
    for (std::size_t start = 0; start < order.size();) {
        std::size_t stop = start + 1;
        while (stop < order.size() && tied(mag(order[start]), mag(order[stop]))) ++stop;
        // Ranks are 1-based: positions start..stop-1 share their mean rank.
        const double rank = 0.5 * static_cast<double>(start + 1 + stop);
        for (std::size_t p = start; p < stop; ++p) {
            const std::size_t k = order[p];
            s.ranks[k] = s.log_ratios[k] > 0.0 ? rank : -rank;
            (s.log_ratios[k] > 0.0 ? s.r_plus : s.r_minus) += rank;
        }
        start = stop;
    }
    s.t_stat = std::min(s.r_plus, s.r_minus);
    return s;
}

enum class Relation { Greater, Less, EqualRegion };

constexpr std::string_view to_string(Relation r) noexcept {
    switch (r) {
        case Relation::Greater: return ">";
        case Relation::Less: return "<";
        case Relation::EqualRegion: return "=";
    }
    return "?";
}

/// Confidence band inside which CLI output shows a pair as "equal".
inline constexpr double kEqualRegionLow = 0.45;
inline constexpr double kEqualRegionHigh = 0.55;

inline bool in_equal_region(double d) noexcept { return d >= kEqualRegionLow && d <= kEqualRegionHigh; }

struct CredalOrdering {
    std::size_t i = 0;
    std::size_t j = 0;
    /// Greater when c_i is the more likely winner, otherwise Less.
    Relation relation = Relation::Greater;
    /// Confidence of `relation`, in [0.5, 1].
    double d = 0.5;
    /// Posterior probability that c_i is more important than c_j.
    double p_greater = 0.5;

    static CredalOrdering from_probability(std::size_t i, std::size_t j, double p) {
        const bool greater = p >= 0.5;
        return {i, j, greater ? Relation::Greater : Relation::Less, greater ? p : 1.0 - p, p};
    }

    std::size_t winner() const noexcept { return relation == Relation::Less ? j : i; }
    std::size_t loser() const noexcept { return relation == Relation::Less ? i : j; }
};

namespace detail {

// Signs of all Walsh averages of ascending-sorted `z`, precomputed as index
// thresholds so each Monte Carlo sample costs O(m).
class WalshSignScorer {
public:
    explicit WalshSignScorer(std::span<const double> sorted) : z_(sorted.begin(), sorted.end()) {
        const std::size_t m = z_.size();
        below_.resize(m);
        not_above_.resize(m);
        for (std::size_t a = 0; a < m; ++a) {
            const double t = -z_[a];
            below_[a] = static_cast<std::size_t>(std::lower_bound(z_.begin(), z_.end(), t) - z_.begin());
            not_above_[a] = static_cast<std::size_t>(std::upper_bound(z_.begin(), z_.end(), t) - z_.begin());
        }
        prefix_.resize(m + 1);
    }

    /// 2 * sum_{a <= b} g_a g_b sign(z_a + z_b), weights in sorted order.
    double score(std::span<const double> g) {
        const std::size_t m = z_.size();
        prefix_[0] = 0.0;
        for (std::size_t a = 0; a < m; ++a) prefix_[a + 1] = prefix_[a] + g[a];
        const double total = prefix_[m];
        double full = 0.0;
        double diag = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            const double pos = total - prefix_[not_above_[a]];
            const double neg = prefix_[below_[a]];
            full += g[a] * (pos - neg);
            if (z_[a] > 0.0) diag += g[a] * g[a];
            else if (z_[a] < 0.0) diag -= g[a] * g[a];
        }
        return full + diag;
    }

private:
    std::vector<double> z_;
    std::vector<std::size_t> below_;
    std::vector<std::size_t> not_above_;
    std::vector<double> prefix_;
};

}  // namespace detail

/// P(pseudo-median of `z` > 0) by Monte Carlo over Dirichlet weights on the
/// values augmented with a pseudo-observation at 0 of weight `prior_strength`.
/// Samples whose Walsh-average score is exactly zero count one half.
///
/// Weights are drawn per observation in input order, so negating `z` with the
/// same seed yields the complementary probability.
inline double bayesian_signed_rank_probability(std::span<const double> z, std::size_t mc_samples, std::uint64_t seed,
                                               double prior_strength = 1.0) {
    if (mc_samples < 1) throw InputError("mc_samples must be positive");
    if (!(prior_strength > 0.0)) throw InputError("prior strength must be positive");

    const std::size_t m = z.size() + 1;
    std::vector<double> values;
    values.reserve(m);
    values.push_back(0.0);
    values.insert(values.end(), z.begin(), z.end());

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> sorted(m);
    for (std::size_t p = 0; p < m; ++p) sorted[p] = values[order[p]];

    detail::WalshSignScorer scorer(sorted);
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> pseudo(prior_strength, 1.0);
    std::exponential_distribution<double> unit(1.0);

    std::vector<double> drawn(m);
    std::vector<double> g(m);
    std::size_t wins = 0;
    std::size_t ties = 0;
    for (std::size_t s = 0; s < mc_samples; ++s) {
        drawn[0] = pseudo(rng);
        for (std::size_t k = 1; k < m; ++k) drawn[k] = unit(rng);
        for (std::size_t p = 0; p < m; ++p) g[p] = drawn[order[p]];
        const double score = scorer.score(g);
        if (score > 0.0) ++wins;
        else if (score == 0.0) ++ties;
    }
    return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) / static_cast<double>(mc_samples);
}

inline constexpr std::size_t kDefaultMcSamples = 10000;

inline CredalOrdering bayesian_signed_rank(const PriorityMatrix& W, std::size_t i, std::size_t j,
                                           std::size_t mc_samples, std::uint64_t seed, double prior_strength = 1.0) {
    if (W.dms() < 2) throw InsufficientSamples(2, W.dms());
    if (mc_samples < 1000) throw InputError("mc_samples must be at least 1000");
    if (i == j || i >= W.criteria() || j >= W.criteria()) throw InputError("invalid criterion pair");
    const auto z = W.log_ratio_column(i, j);
    return CredalOrdering::from_probability(i, j, bayesian_signed_rank_probability(z, mc_samples, seed, prior_strength));
}

/// P(p > 1/2) for p ~ Beta(alpha, beta).
inline double beta_upper_half(double alpha, double beta) {
    if (alpha == beta) return 0.5;
    // 1 - I_{1/2}(alpha, beta) = I_{1/2}(beta, alpha); evaluate the smaller
    // tail directly and complement the larger one.
    if (alpha < beta) return boost::math::ibeta(beta, alpha, 0.5);
    return 1.0 - boost::math::ibeta(alpha, beta, 0.5);
}

/// Beta-binomial sign test: s DMs favour c_i, f favour c_j, ties ignored.
inline CredalOrdering sign_test(const PriorityMatrix& W, std::size_t i, std::size_t j, double prior_a = 1.0,
                                double prior_b = 1.0) {
    if (!(prior_a > 0.0) || !(prior_b > 0.0)) throw InputError("beta prior parameters must be positive");
    if (i == j || i >= W.criteria() || j >= W.criteria()) throw InputError("invalid criterion pair");
    double s = 0.0;
    double f = 0.0;
    for (std::size_t k = 0; k < W.dms(); ++k) {
        if (W(k, i) > W(k, j)) s += 1.0;
        else if (W(k, i) < W(k, j)) f += 1.0;
    }
    return CredalOrdering::from_probability(i, j, beta_upper_half(prior_a + s, prior_b + f));
}

enum class RankTest { BayesWilcoxon, SignTest };

constexpr std::string_view to_string(RankTest t) noexcept {
    return t == RankTest::BayesWilcoxon ? "bayes-wilcoxon" : "sign";
}

struct CredalOptions {
    RankTest test = RankTest::BayesWilcoxon;
    std::size_t mc_samples = kDefaultMcSamples;
    std::uint64_t seed = 0;
    double prior_strength = 1.0;
    double prior_a = 1.0;
    double prior_b = 1.0;
};

struct CredalRanking {
    std::vector<CredalOrdering> orderings;
    RankTest test = RankTest::BayesWilcoxon;
    std::size_t mc_samples = 0;
    std::uint64_t seed = 0;

    const CredalOrdering& pair(std::size_t i, std::size_t j) const {
        for (const auto& o : orderings)
            if ((o.i == i && o.j == j) || (o.i == j && o.j == i)) return o;
        throw InputError("pair not in ranking");
    }

    /// P(c_i more important than c_j), either orientation.
    double probability(std::size_t i, std::size_t j) const {
        const auto& o = pair(i, j);
        return o.i == i ? o.p_greater : 1.0 - o.p_greater;
    }
};

/// Seed of the Monte Carlo stream used for pair (i, j), i < j.
inline std::uint64_t pair_seed(std::uint64_t seed, std::size_t i, std::size_t j, std::size_t n) {
    return seed ^ detail::splitmix64(pair_index(i, j, n));
}

/// One credal ordering per unordered pair (i < j, lexicographic).
inline CredalRanking credal_ranking(const PriorityMatrix& W, const CredalOptions& opts) {
    const std::size_t n = W.criteria();
    CredalRanking out{{}, opts.test, opts.test == RankTest::BayesWilcoxon ? opts.mc_samples : 0, opts.seed};
    out.orderings.reserve(pair_count(n));
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (opts.test == RankTest::SignTest) {
                out.orderings.push_back(sign_test(W, i, j, opts.prior_a, opts.prior_b));
            } else {
                out.orderings.push_back(
                    bayesian_signed_rank(W, i, j, opts.mc_samples, pair_seed(opts.seed, i, j, n), opts.prior_strength));
            }
        }
    return out;
}

}  // namespace compdm
