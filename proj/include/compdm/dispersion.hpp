#pragma once

// Spread of a group's priorities, pair by pair, in log-ratio space.

#include <cmath>
#include <string_view>
#include <vector>

#include "compdm/aggregation.hpp"
#include "compdm/composition.hpp"
#include "compdm/detail/numeric.hpp"

namespace compdm {

enum class DeviationEstimator { Std, Mad, RobustWeighted };

/// Symmetric n x n array of pairwise log-ratio deviations, zero diagonal.
class DeviationArray {
public:
    DeviationArray(std::size_t n, DeviationEstimator estimator) : n_(n), estimator_(estimator), tau_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    DeviationEstimator estimator() const noexcept { return estimator_; }
    double operator()(std::size_t i, std::size_t j) const { return tau_[i * n_ + j]; }

    void set_pair(std::size_t i, std::size_t j, double value) {
        tau_[i * n_ + j] = value;
        tau_[j * n_ + i] = value;
    }

private:
    std::size_t n_;
    DeviationEstimator estimator_;
    std::vector<double> tau_;
};

namespace detail {

template <class PairFn>
DeviationArray deviation_array(const PriorityMatrix& W, DeviationEstimator tag, PairFn&& fn) {
    const std::size_t n = W.criteria();
    DeviationArray out(n, tag);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.set_pair(i, j, fn(i, j, W.log_ratio_column(i, j)));
    return out;
}

}  // namespace detail

/// Sample standard deviation (K - 1 denominator) of each pair's log-ratios.
inline DeviationArray deviation_array_std(const PriorityMatrix& W) {
    if (W.dms() < 2) throw InsufficientSamples(2, W.dms());
    const double dof = static_cast<double>(W.dms() - 1);
    return detail::deviation_array(W, DeviationEstimator::Std, [&](std::size_t, std::size_t, std::vector<double> z) {
        const double mean = detail::order_free_mean(z);
        for (double& v : z) v = (v - mean) * (v - mean);
        return std::sqrt(detail::order_free_sum(std::move(z)) / dof);
    });
}

/// Median absolute deviation from the median; no consistency constant.
inline DeviationArray deviation_array_mad(const PriorityMatrix& W) {
    return detail::deviation_array(W, DeviationEstimator::Mad, [](std::size_t, std::size_t, std::vector<double> z) {
        const double med = detail::median(z);
        for (double& v : z) v = std::abs(v - med);
        return detail::median(std::move(z));
    });
}

/// tau_ij = sqrt(sum_k lambda_k (ln(W_ki / W_kj) - xi_ij)^2).
inline DeviationArray deviation_array_robust(const PriorityMatrix& W, const std::vector<double>& lambda,
                                             const CompositionalAverageArray& xi) {
    detail::check_dm_weights(W, lambda);
    if (xi.size() != W.criteria()) throw DimensionMismatch(W.criteria(), xi.size());
    return detail::deviation_array(W, DeviationEstimator::RobustWeighted,
                                   [&](std::size_t i, std::size_t j, const std::vector<double>& z) {
                                       double s = 0.0;
                                       for (std::size_t k = 0; k < z.size(); ++k) {
                                           const double r = z[k] - xi(i, j);
                                           s += lambda[k] * r * r;
                                       }
                                       return std::sqrt(s);
                                   });
}

enum class AverageKind { Mean, Median, Awgmm };

constexpr std::string_view to_string(AverageKind k) noexcept {
    switch (k) {
        case AverageKind::Mean: return "mean";
        case AverageKind::Median: return "median";
        case AverageKind::Awgmm: return "awgmm";
    }
    return "?";
}

/// Averages above the diagonal, matching deviations below it.
struct AverageDeviationArray {
    AverageKind kind = AverageKind::Mean;
    CompositionalAverageArray average{0};
    DeviationArray deviation{0, DeviationEstimator::Std};

    std::size_t size() const noexcept { return average.size(); }

    /// Entry (i, j) of the combined layout: xi_ij for i < j, tau_ij for i > j.
    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        return i < j ? average(i, j) : deviation(i, j);
    }
};

inline AverageDeviationArray average_deviation_array(const PriorityMatrix& W, AverageKind kind,
                                                     const AwgmmOptions& opts = {}) {
    switch (kind) {
        case AverageKind::Mean:
            return {kind, build_average_array(W, MeanEstimator{}), deviation_array_std(W)};
        case AverageKind::Median:
            return {kind, build_average_array(W, MedianEstimator{}), deviation_array_mad(W)};
        case AverageKind::Awgmm: {
            const auto agg = aggregate_awgmm(W, opts);
            auto xi = build_average_array(W, WeightedEstimator{*agg.lambda});
            auto tau = deviation_array_robust(W, *agg.lambda, xi);
            return {kind, std::move(xi), std::move(tau)};
        }
    }
    throw InputError("unknown average kind");
}

}  // namespace compdm
