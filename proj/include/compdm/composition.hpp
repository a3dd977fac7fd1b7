#pragma once

// Core simplex types: compositions, priority matrices, pairwise log-ratio
// vectors, compositional average arrays and pairwise comparison matrices.
//
// Pairs (i, j) with i < j are always enumerated lexicographically:
// (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "compdm/errors.hpp"

namespace compdm {

inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kConsistencyTol = 1e-8;

/// Number of unordered criterion pairs for `n` criteria.
constexpr std::size_t pair_count(std::size_t n) noexcept { return n * (n - 1) / 2; }

/// Position of pair (i, j), i < j, in the lexicographic enumeration.
constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) noexcept {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Inverse of pair_index: the (i, j) pair stored at position `idx`.
inline std::pair<std::size_t, std::size_t> pair_at(std::size_t idx, std::size_t n) noexcept {
    std::size_t i = 0;
    std::size_t row = n - 1;
    while (idx >= row) {
        idx -= row;
        ++i;
        --row;
    }
    return {i, i + 1 + idx};
}

/// Recovers n from a log-ratio dimension n(n-1)/2; throws DimensionMismatch
/// when `m` is not a triangular number with n >= 2.
inline std::size_t criteria_from_pair_count(std::size_t m) {
    const auto n = static_cast<std::size_t>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(m))) / 2.0));
    if (n < 2 || pair_count(n) != m) throw DimensionMismatch(pair_count(n < 2 ? 2 : n), m);
    return n;
}

inline std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(i + 1));
    return labels;
}

/// Strictly positive, unit-sum vector of criterion weights.
class Composition {
public:
    /// Closes `raw` to unit sum. Throws NonPositiveEntry / DimensionTooSmall.
    explicit Composition(std::vector<double> raw) : parts_(std::move(raw)) {
        if (parts_.size() < 2) throw DimensionTooSmall(parts_.size());
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (!(parts_[i] > 0.0) || !std::isfinite(parts_[i])) throw NonPositiveEntry(i);
        }
        const double total = std::accumulate(parts_.begin(), parts_.end(), 0.0);
        // Already closed up to rounding: keep the bits so closure is idempotent.
        if (std::abs(total - 1.0) <= 4.0 * static_cast<double>(parts_.size()) * 2.220446049250313e-16) return;
        for (double& p : parts_) p /= total;
    }

    std::size_t size() const noexcept { return parts_.size(); }
    double operator[](std::size_t i) const { return parts_[i]; }
    std::span<const double> parts() const noexcept { return parts_; }
    const std::vector<double>& values() const noexcept { return parts_; }

    double sum() const { return std::accumulate(parts_.begin(), parts_.end(), 0.0); }

    /// ln(w_i / w_j), computed as a difference of logs so (i,j) and (j,i)
    /// are exact negatives of each other.
    double log_ratio(std::size_t i, std::size_t j) const { return std::log(parts_[i]) - std::log(parts_[j]); }

    friend bool operator==(const Composition&, const Composition&) = default;

private:
    std::vector<double> parts_;
};

inline Composition close(std::vector<double> raw) { return Composition(std::move(raw)); }

/// K decision-makers' priorities over the same n labelled criteria.
class PriorityMatrix {
public:
    PriorityMatrix(std::vector<Composition> rows, std::vector<std::string> labels)
        : rows_(std::move(rows)), labels_(std::move(labels)) {
        if (rows_.empty()) throw InsufficientSamples(1, 0);
        const std::size_t n = rows_.front().size();
        for (const auto& r : rows_) {
            if (r.size() != n) throw DimensionMismatch(n, r.size());
        }
        if (labels_.empty()) labels_ = default_labels(n);
        if (labels_.size() != n) throw DimensionMismatch(n, labels_.size());
    }

    explicit PriorityMatrix(std::vector<Composition> rows) : PriorityMatrix(std::move(rows), {}) {}

    /// Closes every raw row.
    static PriorityMatrix from_rows(const std::vector<std::vector<double>>& raw,
                                    std::vector<std::string> labels = {}) {
        std::vector<Composition> rows;
        rows.reserve(raw.size());
        for (const auto& r : raw) rows.emplace_back(r);
        return PriorityMatrix(std::move(rows), std::move(labels));
    }

    std::size_t dms() const noexcept { return rows_.size(); }
    std::size_t criteria() const noexcept { return rows_.front().size(); }
    const Composition& row(std::size_t k) const { return rows_[k]; }
    const std::vector<Composition>& rows() const noexcept { return rows_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    double operator()(std::size_t k, std::size_t i) const { return rows_[k][i]; }

    /// ln(W_ki / W_kj) for every DM k.
    std::vector<double> log_ratio_column(std::size_t i, std::size_t j) const {
        std::vector<double> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_) out.push_back(r.log_ratio(i, j));
        return out;
    }

    friend bool operator==(const PriorityMatrix&, const PriorityMatrix&) = default;

private:
    std::vector<Composition> rows_;
    std::vector<std::string> labels_;
};

/// Pairwise log-ratios ln(w_i / w_j) over lexicographic pairs i < j.
struct LogRatioVector {
    std::size_t n = 0;
    std::vector<double> entries;

    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        return i < j ? entries[pair_index(i, j, n)] : -entries[pair_index(j, i, n)];
    }
    std::size_t size() const noexcept { return entries.size(); }

    friend bool operator==(const LogRatioVector&, const LogRatioVector&) = default;
};

inline LogRatioVector log_ratio_transform(const Composition& w) {
    const std::size_t n = w.size();
    LogRatioVector out{n, {}};
    out.entries.reserve(pair_count(n));
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.entries.push_back(w.log_ratio(i, j));
    return out;
}

/// Every DM's log-ratio vector (the rows of the log-ratio data matrix).
inline std::vector<LogRatioVector> log_ratio_rows(const PriorityMatrix& W) {
    std::vector<LogRatioVector> out;
    out.reserve(W.dms());
    for (const auto& r : W.rows()) out.push_back(log_ratio_transform(r));
    return out;
}

namespace detail {

// Centred log-coordinates reconstructed from the (0, j) entries, plus the
// largest violation of v_ij = c_i - c_j over all pairs.
inline std::pair<std::vector<double>, double> reconstruct_logs(const LogRatioVector& v) {
    const std::size_t n = v.n;
    std::vector<double> c(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) c[j] = -v(0, j);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double vij = v(i, j);
            worst = std::max(worst, std::abs(vij - (c[i] - c[j])) / std::max(1.0, std::abs(vij)));
        }
    return {std::move(c), worst};
}

inline Composition exp_close(std::vector<double> logs) {
    double top = logs.front();
    for (double x : logs) top = std::max(top, x);
    for (double& x : logs) x = std::exp(x - top);
    return Composition(std::move(logs));
}

}  // namespace detail

/// Maps additively consistent log-ratios back onto the simplex.
inline Composition inverse_log_ratio(const LogRatioVector& v) {
    const std::size_t n = criteria_from_pair_count(v.entries.size());
    if (v.n != n) throw DimensionMismatch(n, v.n);
    auto [logs, worst] = detail::reconstruct_logs(v);
    if (worst > kConsistencyTol) throw InconsistentLogRatios(worst);
    return detail::exp_close(std::move(logs));
}

/// n x n array of expected log-ratios; entry (i, j) estimates ln(w_i / w_j).
class CompositionalAverageArray {
public:
    explicit CompositionalAverageArray(std::size_t n) : n_(n), xi_(n * n, 0.0) {}

    /// Upper triangle from `v`, lower triangle its exact negation.
    static CompositionalAverageArray from_log_ratios(const LogRatioVector& v) {
        CompositionalAverageArray e(v.n);
        for (std::size_t i = 0; i + 1 < v.n; ++i)
            for (std::size_t j = i + 1; j < v.n; ++j) e.set_pair(i, j, v(i, j));
        return e;
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return xi_[i * n_ + j]; }

    /// Sets (i, j) to `value` and (j, i) to `-value`.
    void set_pair(std::size_t i, std::size_t j, double value) {
        xi_[i * n_ + j] = value;
        xi_[j * n_ + i] = -value;
    }

    LogRatioVector upper() const {
        LogRatioVector v{n_, {}};
        v.entries.reserve(pair_count(n_));
        for (std::size_t i = 0; i + 1 < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) v.entries.push_back((*this)(i, j));
        return v;
    }

    double max_antisymmetry_violation() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                worst = std::max(worst, std::abs((*this)(i, j) + (*this)(j, i)));
        return worst;
    }

    /// max |xi_ij - xi_ik - xi_kj| over all triples.
    double max_consistency_violation() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                for (std::size_t k = 0; k < n_; ++k)
                    worst = std::max(worst, std::abs((*this)(i, j) - (*this)(i, k) - (*this)(k, j)));
        return worst;
    }

    friend bool operator==(const CompositionalAverageArray&, const CompositionalAverageArray&) = default;

private:
    std::size_t n_;
    std::vector<double> xi_;
};

/// Normalized exponential of the first column: c_i = exp(xi_i1) / sum.
inline Composition array_to_composition(const CompositionalAverageArray& e) {
    const std::size_t n = e.size();
    if (n < 2) throw DimensionTooSmall(n);
    const double worst = e.max_consistency_violation();
    if (worst > kConsistencyTol) throw InconsistentArray(worst);
    std::vector<double> logs(n);
    for (std::size_t i = 0; i < n; ++i) logs[i] = e(i, 0);
    Composition out = detail::exp_close(std::move(logs));
#ifndef NDEBUG
    {
        std::vector<double> other(n);
        for (std::size_t i = 0; i < n; ++i) other[i] = e(i, n - 1);
        const Composition alt = detail::exp_close(std::move(other));
        for (std::size_t i = 0; i < n; ++i) assert(std::abs(alt[i] - out[i]) <= 1e-6);
    }
#endif
    return out;
}

/// Reciprocal pairwise comparison matrix: m_ij * m_ji = 1, unit diagonal.
class Pcm {
public:
    explicit Pcm(std::vector<std::vector<double>> m) : m_(std::move(m)) {
        const std::size_t n = m_.size();
        if (n < 2) throw DimensionTooSmall(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (m_[i].size() != n) throw DimensionMismatch(n, m_[i].size());
            for (std::size_t j = 0; j < n; ++j)
                if (!(m_[i][j] > 0.0)) throw NonPositiveEntry(i * n + j);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(m_[i][i] - 1.0) > kAlgebraicTol) throw InputError("PCM diagonal must be 1");
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(m_[i][j] * m_[j][i] - 1.0) > kAlgebraicTol)
                    throw InputError("PCM is not reciprocal at (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
        }
    }

    std::size_t size() const noexcept { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }

private:
    std::vector<std::vector<double>> m_;
};

/// Multiplicative transitivity: |m_ij - m_ih m_hj| <= tol * m_ij for all i, j, h.
inline bool is_fully_consistent(const Pcm& m, double tol = kAlgebraicTol) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t h = 0; h < n; ++h)
                if (std::abs(m(i, j) - m(i, h) * m(h, j)) > tol * m(i, j)) return false;
    return true;
}

}  // namespace compdm
