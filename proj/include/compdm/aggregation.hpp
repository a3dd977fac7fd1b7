#pragma once

// Group aggregation of DM priorities: arithmetic mean (AMM, kept only as the
// fallacious reference), geometric mean via the compositional average array
// (GMM) and the adaptive weighted geometric mean (AWGMM), a Welsch-kernel
// half-quadratic iteration that down-weights deviant decision-makers.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "compdm/composition.hpp"
#include "compdm/detail/numeric.hpp"

namespace compdm {

enum class AggregationMethod { Amm, Gmm, Awgmm };

constexpr std::string_view to_string(AggregationMethod m) noexcept {
    switch (m) {
        case AggregationMethod::Amm: return "amm";
        case AggregationMethod::Gmm: return "gmm";
        case AggregationMethod::Awgmm: return "awgmm";
    }
    return "?";
}

struct AggregationResult {
    Composition weights;
    AggregationMethod method = AggregationMethod::Gmm;
    /// DM weights; AWGMM only.
    std::optional<std::vector<double>> lambda;
    std::size_t iterations = 0;
    bool converged = true;
    /// sigma^2 after initialisation and after every iteration; AWGMM only.
    std::vector<double> sigma_trace;
    /// Set when every DM coincides and sigma^2 collapses to zero.
    bool degenerate_sigma = false;
};

struct MeanEstimator {};
struct MedianEstimator {};
struct WeightedEstimator {
    std::vector<double> lambda;
};
using AverageEstimator = std::variant<MeanEstimator, MedianEstimator, WeightedEstimator>;

namespace detail {

inline void check_dm_weights(const PriorityMatrix& W, const std::vector<double>& lambda) {
    if (lambda.size() != W.dms()) throw WeightDimensionMismatch(W.dms(), lambda.size());
    double total = 0.0;
    for (double l : lambda) {
        if (!(l >= 0.0)) throw InputError("DM weights must be non-negative");
        total += l;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("DM weights must sum to 1");
}

inline double weighted_sum(const std::vector<double>& lambda, const std::vector<double>& values) {
    double s = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) s += lambda[k] * values[k];
    return s;
}

}  // namespace detail

/// Column-wise arithmetic mean of the raw rows. Not a valid average of
/// compositions; provided for comparison only.
inline AggregationResult aggregate_amm(const PriorityMatrix& W) {
    std::vector<double> mean(W.criteria(), 0.0);
    for (std::size_t i = 0; i < W.criteria(); ++i) {
        std::vector<double> col;
        col.reserve(W.dms());
        for (std::size_t k = 0; k < W.dms(); ++k) col.push_back(W(k, i));
        mean[i] = detail::order_free_mean(std::move(col));
    }
    return AggregationResult{Composition(std::move(mean)), AggregationMethod::Amm, std::nullopt, 0, true, {}, false};
}

/// xi_ij = estimator over k of ln(W_ki / W_kj).
///
/// Mean and weighted estimators are additively consistent by linearity; the
/// median generally is not.
inline CompositionalAverageArray build_average_array(const PriorityMatrix& W, const AverageEstimator& estimator) {
    if (const auto* w = std::get_if<WeightedEstimator>(&estimator)) detail::check_dm_weights(W, w->lambda);
    const std::size_t n = W.criteria();
    CompositionalAverageArray e(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            auto column = W.log_ratio_column(i, j);
            const double value = std::visit(
                [&](const auto& est) -> double {
                    using T = std::decay_t<decltype(est)>;
                    if constexpr (std::is_same_v<T, MeanEstimator>) return detail::order_free_mean(std::move(column));
                    else if constexpr (std::is_same_v<T, MedianEstimator>) return detail::median(std::move(column));
                    else return detail::weighted_sum(est.lambda, column);
                },
                estimator);
            e.set_pair(i, j, value);
        }
    }
    return e;
}

/// close(prod_k W_k^lambda_k), evaluated in log space.
inline Composition weighted_geometric_mean(const PriorityMatrix& W, const std::vector<double>& lambda) {
    detail::check_dm_weights(W, lambda);
    std::vector<double> logs(W.criteria(), 0.0);
    for (std::size_t i = 0; i < W.criteria(); ++i)
        for (std::size_t k = 0; k < W.dms(); ++k) logs[i] += lambda[k] * std::log(W(k, i));
    return detail::exp_close(std::move(logs));
}

inline AggregationResult aggregate_gmm(const PriorityMatrix& W) {
    return AggregationResult{array_to_composition(build_average_array(W, MeanEstimator{})),
                             AggregationMethod::Gmm, std::nullopt, 0, true, {}, false};
}

struct AwgmmOptions {
    std::size_t max_iter = 500;
    double tol = 1e-10;
    /// Divisor in the sigma^2 update; defaults to n^2.
    std::optional<double> sigma_denominator;
    /// phi(x) = x: every alpha is 1 and the fixed point is the GMM.
    bool force_identity_estimator = false;
};

/// Robust aggregation with Welsch weights.
///
/// Starting from the mean log-ratio vector, repeats
///   alpha_k = exp(-||L_k - w||^2 / sigma^2),  lambda = alpha / sum(alpha),
///   w = sum_k lambda_k L_k,  sigma^2 = sum_k ||L_k - w||^2 / n^2
/// until the largest change in w drops below `opts.tol`. The returned
/// weights are the inverse log-ratio of w, i.e. the lambda-weighted
/// geometric mean of the rows.
inline AggregationResult aggregate_awgmm(const PriorityMatrix& W, const AwgmmOptions& opts = {}) {
    const std::size_t K = W.dms();
    const std::size_t n = W.criteria();
    if (K < 2) throw InsufficientSamples(2, K);
    if (opts.max_iter < 1) throw InputError("max_iter must be at least 1");
    if (!(opts.tol > 0.0)) throw InputError("tol must be positive");
    const double denom = opts.sigma_denominator.value_or(static_cast<double>(n * n));
    if (!(denom > 0.0)) throw InputError("sigma denominator must be positive");

    const auto rows = log_ratio_rows(W);
    const std::size_t m = pair_count(n);

    LogRatioVector centre{n, std::vector<double>(m)};
    for (std::size_t p = 0; p < m; ++p) {
        std::vector<double> col;
        col.reserve(K);
        for (const auto& r : rows) col.push_back(r.entries[p]);
        centre.entries[p] = detail::order_free_mean(std::move(col));
    }

    auto squared_residuals = [&](const LogRatioVector& c) {
        std::vector<double> d2(K, 0.0);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t p = 0; p < m; ++p) {
                const double r = rows[k].entries[p] - c.entries[p];
                d2[k] += r * r;
            }
        return d2;
    };
    auto sigma_sq = [&](const std::vector<double>& d2) {
        double s = 0.0;
        for (double v : d2) s += v;
        return s / denom;
    };

    std::vector<double> d2 = squared_residuals(centre);
    double sigma2 = sigma_sq(d2);

    AggregationResult result{inverse_log_ratio(centre), AggregationMethod::Awgmm,
                             std::vector<double>(K, 1.0 / static_cast<double>(K)), 0, false, {sigma2}, false};

    if (sigma2 < 1e-300) {
        result.converged = true;
        result.degenerate_sigma = true;
        return result;
    }

    std::vector<double> lambda(K);
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        if (opts.force_identity_estimator) {
            std::fill(lambda.begin(), lambda.end(), 1.0 / static_cast<double>(K));
        } else {
            // Shifting by the smallest residual leaves lambda unchanged and
            // keeps at least one alpha equal to 1.
            const double shift = *std::min_element(d2.begin(), d2.end());
            double total = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                lambda[k] = std::exp(-(d2[k] - shift) / sigma2);
                total += lambda[k];
            }
            for (double& l : lambda) l /= total;
        }

        LogRatioVector next{n, std::vector<double>(m, 0.0)};
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t p = 0; p < m; ++p) next.entries[p] += lambda[k] * rows[k].entries[p];

        double change = 0.0;
        for (std::size_t p = 0; p < m; ++p) change = std::max(change, std::abs(next.entries[p] - centre.entries[p]));
        centre = std::move(next);
        d2 = squared_residuals(centre);
        sigma2 = sigma_sq(d2);
        result.sigma_trace.push_back(sigma2);
        result.iterations = it;

        if (change < opts.tol) {
            result.converged = true;
            break;
        }
        if (sigma2 < 1e-300) {
            result.degenerate_sigma = true;
            result.converged = true;
            break;
        }
    }

    result.weights = inverse_log_ratio(centre);
    result.lambda = lambda;
#ifndef NDEBUG
    {
        const Composition via_product = weighted_geometric_mean(W, lambda);
        // lambda is from the last alpha step, which produced `centre`.
        for (std::size_t i = 0; i < n; ++i) assert(std::abs(via_product[i] - result.weights[i]) <= 1e-10);
    }
#endif
    return result;
}

struct ParetoCheck {
    std::size_t preferred = 0;
    std::size_t other = 0;
    bool preserved = false;
};

/// For every ordered pair where all DMs strictly prefer `preferred` over
/// `other`, whether the aggregate does too.
inline std::vector<ParetoCheck> check_pareto(const PriorityMatrix& W, const AggregationResult& result) {
    std::vector<ParetoCheck> out;
    const std::size_t n = W.criteria();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            bool unanimous = true;
            for (std::size_t k = 0; k < W.dms() && unanimous; ++k) unanimous = W(k, i) > W(k, j);
            if (unanimous) out.push_back({i, j, result.weights[i] > result.weights[j]});
        }
    return out;
}

}  // namespace compdm
