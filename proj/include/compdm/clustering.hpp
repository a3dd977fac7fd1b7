#pragma once

// Distances between compositions and K-means over decision-makers.
//
// kmeans_compositional assigns with a compositional distance (Aitchison or
// MADC) and recomputes centroids as closed geometric means, so centroids stay
// on the simplex. kmeans_standard_baseline is plain Euclidean K-means on the
// raw weights with arithmetic-mean centroids; it exists to show that those
// centroids need not sum to one.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

#include "compdm/composition.hpp"
#include "compdm/detail/numeric.hpp"

namespace compdm {

inline double aitchison_distance(const Composition& w, const Composition& v) {
    if (w.size() != v.size()) throw DimensionMismatch(w.size(), v.size());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            const double d = w.log_ratio(i, j) - v.log_ratio(i, j);
            s += d * d;
        }
    return std::sqrt(s);
}

inline double madc_distance(const Composition& w, const Composition& v) {
    if (w.size() != v.size()) throw DimensionMismatch(w.size(), v.size());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        for (std::size_t j = i + 1; j < w.size(); ++j) s += std::abs(w.log_ratio(i, j) - v.log_ratio(i, j));
    return s;
}

enum class DistanceKind { Aitchison, Madc, Euclidean };

constexpr std::string_view to_string(DistanceKind d) noexcept {
    switch (d) {
        case DistanceKind::Aitchison: return "aitchison";
        case DistanceKind::Madc: return "madc";
        case DistanceKind::Euclidean: return "euclidean";
    }
    return "?";
}

struct KMeansOptions {
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    std::size_t restarts = 10;
};

struct ClusterModel {
    /// Closed geometric means for the compositional model; raw arithmetic
    /// means (not necessarily unit-sum) for the baseline.
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> assignments;
    DistanceKind distance = DistanceKind::Aitchison;
    /// Sum of squared member-to-centroid distances.
    double inertia = 0.0;
    /// Inertia after each assignment step of the winning restart.
    std::vector<double> inertia_trace;
    std::size_t iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    /// Times an emptied cluster was re-seeded (all restarts).
    std::size_t empty_clusters_resolved = 0;
    bool baseline = false;

    std::vector<std::size_t> cluster_sizes() const {
        std::vector<std::size_t> sizes(centroids.size(), 0);
        for (auto a : assignments) ++sizes[a];
        return sizes;
    }
};

namespace detail {

// Points and centroids in the coordinates the distance is computed in:
// pairwise log-ratios for the compositional distances, raw weights for the
// Euclidean baseline.
inline std::vector<std::vector<double>> embed(const PriorityMatrix& W, DistanceKind kind) {
    std::vector<std::vector<double>> pts;
    pts.reserve(W.dms());
    for (const auto& r : W.rows()) {
        if (kind == DistanceKind::Euclidean) pts.push_back(r.values());
        else pts.push_back(log_ratio_transform(r).entries);
    }
    return pts;
}

inline double point_distance(const std::vector<double>& a, const std::vector<double>& b, DistanceKind kind) {
    double s = 0.0;
    if (kind == DistanceKind::Madc) {
        for (std::size_t p = 0; p < a.size(); ++p) s += std::abs(a[p] - b[p]);
        return s;
    }
    for (std::size_t p = 0; p < a.size(); ++p) s += (a[p] - b[p]) * (a[p] - b[p]);
    return std::sqrt(s);
}

// Arithmetic mean in embedded coordinates. For log-ratio coordinates this is
// exactly the log-ratio vector of the closed geometric mean of the members.
inline std::vector<double> member_mean(const std::vector<std::vector<double>>& pts,
                                       const std::vector<std::size_t>& assign, std::size_t cluster) {
    std::vector<double> mean(pts.front().size(), 0.0);
    std::size_t count = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (assign[k] != cluster) continue;
        ++count;
        for (std::size_t p = 0; p < mean.size(); ++p) mean[p] += pts[k][p];
    }
    for (double& v : mean) v /= static_cast<double>(count);
    return mean;
}

// Closed geometric mean of the member rows; the compositional centroid.
inline Composition closed_geometric_mean(const PriorityMatrix& W, const std::vector<std::size_t>& assign,
                                         std::size_t cluster) {
    std::vector<double> logs(W.criteria(), 0.0);
    std::size_t count = 0;
    for (std::size_t k = 0; k < W.dms(); ++k) {
        if (assign[k] != cluster) continue;
        ++count;
        for (std::size_t i = 0; i < W.criteria(); ++i) logs[i] += std::log(W(k, i));
    }
    for (double& v : logs) v /= static_cast<double>(count);
    return exp_close(std::move(logs));
}

struct LloydRun {
    std::vector<std::vector<double>> centres;
    std::vector<std::size_t> assign;
    std::vector<double> trace;
    double inertia = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t reseeded = 0;
};

inline std::vector<std::size_t> seed_indices(const std::vector<std::vector<double>>& pts, std::size_t clusters,
                                             DistanceKind kind, std::mt19937_64& rng) {
    const std::size_t K = pts.size();
    std::vector<std::size_t> chosen;
    chosen.push_back(std::uniform_int_distribution<std::size_t>(0, K - 1)(rng));
    std::vector<double> nearest(K, std::numeric_limits<double>::infinity());
    while (chosen.size() < clusters) {
        for (std::size_t k = 0; k < K; ++k) {
            const double d = point_distance(pts[k], pts[chosen.back()], kind);
            nearest[k] = std::min(nearest[k], d * d);
        }
        double total = 0.0;
        for (double v : nearest) total += v;
        std::size_t pick = 0;
        if (total > 0.0) {
            double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            pick = K - 1;
            for (std::size_t k = 0; k < K; ++k) {
                if (u < nearest[k]) {
                    pick = k;
                    break;
                }
                u -= nearest[k];
            }
            // Never pick an already chosen point (zero weight) because of rounding.
            while (nearest[pick] == 0.0) pick = (pick + 1) % K;
        } else {
            // All remaining points coincide with a chosen one: take the next unused index.
            std::vector<bool> used(K, false);
            for (auto c : chosen) used[c] = true;
            pick = static_cast<std::size_t>(std::find(used.begin(), used.end(), false) - used.begin());
        }
        chosen.push_back(pick);
    }
    return chosen;
}

inline double assign_points(const std::vector<std::vector<double>>& pts, const std::vector<std::vector<double>>& centres,
                            DistanceKind kind, std::vector<std::size_t>& assign) {
    double inertia = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t c = 0; c < centres.size(); ++c) {
            const double d = point_distance(pts[k], centres[c], kind);
            if (d < best) {
                best = d;
                arg = c;
            }
        }
        assign[k] = arg;
        inertia += best * best;
    }
    return inertia;
}

// Moves the point farthest from its own centroid (in a cluster with more
// than one member) into each empty cluster. Returns the number of moves.
inline std::size_t resolve_empty(const std::vector<std::vector<double>>& pts, std::vector<std::vector<double>>& centres,
                                 DistanceKind kind, std::vector<std::size_t>& assign) {
    std::size_t moves = 0;
    for (std::size_t c = 0; c < centres.size(); ++c) {
        std::vector<std::size_t> sizes(centres.size(), 0);
        for (auto a : assign) ++sizes[a];
        if (sizes[c] != 0) continue;
        double worst = -1.0;
        std::size_t far = 0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (sizes[assign[k]] < 2) continue;
            const double d = point_distance(pts[k], centres[assign[k]], kind);
            if (d > worst) {
                worst = d;
                far = k;
            }
        }
        assign[far] = c;
        centres[c] = pts[far];
        ++moves;
    }
    return moves;
}

inline double total_inertia(const std::vector<std::vector<double>>& pts, const std::vector<std::vector<double>>& centres,
                            DistanceKind kind, const std::vector<std::size_t>& assign) {
    double s = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double d = point_distance(pts[k], centres[assign[k]], kind);
        s += d * d;
    }
    return s;
}

// Lloyd iterations from fixed starting centres (embedded coordinates).
inline LloydRun lloyd(const std::vector<std::vector<double>>& pts, std::vector<std::vector<double>> centres,
                      DistanceKind kind, std::size_t max_iter) {
    LloydRun run;
    run.assign.assign(pts.size(), 0);
    run.centres = std::move(centres);
    std::vector<std::size_t> previous;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        assign_points(pts, run.centres, kind, run.assign);
        run.reseeded += resolve_empty(pts, run.centres, kind, run.assign);
        run.iterations = it;
        if (run.assign == previous) {
            run.converged = true;
            run.trace.push_back(total_inertia(pts, run.centres, kind, run.assign));
            break;
        }
        previous = run.assign;
        for (std::size_t c = 0; c < run.centres.size(); ++c) run.centres[c] = member_mean(pts, run.assign, c);
        run.trace.push_back(total_inertia(pts, run.centres, kind, run.assign));
    }
    run.inertia = total_inertia(pts, run.centres, kind, run.assign);
    return run;
}

inline std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(restart)));
}

inline ClusterModel kmeans_impl(const PriorityMatrix& W, std::size_t clusters, DistanceKind kind,
                                const KMeansOptions& opts) {
    const std::size_t K = W.dms();
    if (clusters < 1 || clusters > K) throw TooManyClusters(clusters, K);
    if (opts.max_iter < 1) throw InputError("max_iter must be at least 1");
    const auto pts = embed(W, kind);

    LloydRun best;
    bool have_best = false;
    std::size_t reseeded = 0;
    const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
    for (std::size_t r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(restart_seed(opts.seed, r));
        std::vector<std::vector<double>> centres;
        for (auto idx : seed_indices(pts, clusters, kind, rng)) centres.push_back(pts[idx]);
        LloydRun run = lloyd(pts, std::move(centres), kind, opts.max_iter);
        reseeded += run.reseeded;
        if (!have_best || run.inertia < best.inertia) {
            best = std::move(run);
            have_best = true;
        }
    }

    ClusterModel model;
    model.assignments = best.assign;
    model.distance = kind;
    model.inertia = best.inertia;
    model.inertia_trace = best.trace;
    model.iterations = best.iterations;
    model.converged = best.converged;
    model.seed = opts.seed;
    model.empty_clusters_resolved = reseeded;
    model.baseline = kind == DistanceKind::Euclidean;
    for (std::size_t c = 0; c < clusters; ++c) {
        if (model.baseline) model.centroids.push_back(best.centres[c]);
        else model.centroids.push_back(closed_geometric_mean(W, model.assignments, c).values());
    }
    return model;
}

}  // namespace detail

/// K-means with a compositional distance and closed geometric-mean centroids.
///
/// Seeding draws data points with probability proportional to the squared
/// distance to the nearest chosen centre; the best of `opts.restarts` runs
/// by inertia is returned. Deterministic for a given seed.
inline ClusterModel kmeans_compositional(const PriorityMatrix& W, std::size_t clusters,
                                         DistanceKind distance = DistanceKind::Aitchison,
                                         const KMeansOptions& opts = {}) {
    if (distance == DistanceKind::Euclidean) throw InputError("compositional K-means needs aitchison or madc");
    return detail::kmeans_impl(W, clusters, distance, opts);
}

/// Single Lloyd run of compositional K-means from the given centroids.
inline ClusterModel kmeans_compositional_from(const PriorityMatrix& W, const std::vector<Composition>& initial,
                                              DistanceKind distance = DistanceKind::Aitchison,
                                              std::size_t max_iter = 300) {
    if (distance == DistanceKind::Euclidean) throw InputError("compositional K-means needs aitchison or madc");
    if (initial.empty() || initial.size() > W.dms()) throw TooManyClusters(initial.size(), W.dms());
    const auto pts = detail::embed(W, distance);
    std::vector<std::vector<double>> centres;
    for (const auto& c : initial) {
        if (c.size() != W.criteria()) throw DimensionMismatch(W.criteria(), c.size());
        centres.push_back(log_ratio_transform(c).entries);
    }
    auto run = detail::lloyd(pts, std::move(centres), distance, max_iter);
    ClusterModel model;
    model.assignments = run.assign;
    model.distance = distance;
    model.inertia = run.inertia;
    model.inertia_trace = run.trace;
    model.iterations = run.iterations;
    model.converged = run.converged;
    model.empty_clusters_resolved = run.reseeded;
    for (std::size_t c = 0; c < initial.size(); ++c)
        model.centroids.push_back(detail::closed_geometric_mean(W, model.assignments, c).values());
    return model;
}

/// Euclidean K-means on raw weights with arithmetic-mean centroids.
inline ClusterModel kmeans_standard_baseline(const PriorityMatrix& W, std::size_t clusters, const KMeansOptions& opts = {}) {
    return detail::kmeans_impl(W, clusters, DistanceKind::Euclidean, opts);
}

}  // namespace compdm
