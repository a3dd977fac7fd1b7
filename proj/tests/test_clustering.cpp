#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "compdm/clustering.hpp"
#include "support.hpp"

using namespace compdm;

namespace {

const std::vector<std::vector<double>> kTwoCentres{{0.60, 0.25, 0.10, 0.05}, {0.10, 0.20, 0.30, 0.40}};

double centroid_sum(const std::vector<double>& c) {
    double s = 0.0;
    for (double v : c) s += v;
    return s;
}

// Plain Lloyd iterations in given coordinates; the textbook algorithm.
struct PlainKMeans {
    std::vector<std::vector<double>> centres;
    std::vector<std::size_t> assign;
};

PlainKMeans plain_kmeans(const std::vector<std::vector<double>>& pts, std::vector<std::vector<double>> centres,
                         std::size_t max_iter) {
    std::vector<std::size_t> assign(pts.size(), 0), before;
    for (std::size_t it = 0; it < max_iter; ++it) {
        for (std::size_t k = 0; k < pts.size(); ++k) {
            double best = 1e300;
            for (std::size_t c = 0; c < centres.size(); ++c) {
                double d = 0.0;
                for (std::size_t p = 0; p < pts[k].size(); ++p) d += (pts[k][p] - centres[c][p]) * (pts[k][p] - centres[c][p]);
                if (d < best) {
                    best = d;
                    assign[k] = c;
                }
            }
        }
        if (assign == before) break;
        before = assign;
        for (std::size_t c = 0; c < centres.size(); ++c) {
            std::vector<double> sum(pts[0].size(), 0.0);
            double count = 0.0;
            for (std::size_t k = 0; k < pts.size(); ++k)
                if (assign[k] == c) {
                    count += 1.0;
                    for (std::size_t p = 0; p < sum.size(); ++p) sum[p] += pts[k][p];
                }
            for (double& v : sum) v /= count;
            centres[c] = sum;
        }
    }
    return {centres, assign};
}

double purity(const std::vector<std::size_t>& assign, std::size_t per) {
    // Two blobs in order; labels may be swapped.
    std::size_t agree = 0;
    for (std::size_t k = 0; k < assign.size(); ++k) agree += (assign[k] == assign[0]) == (k < per);
    return static_cast<double>(agree) / static_cast<double>(assign.size());
}

}  // namespace

TEST(Distance, ClosedForms) {
    const auto w = compdm::close({0.75, 0.25});
    const auto v = compdm::close({0.25, 0.75});
    EXPECT_NEAR(aitchison_distance(w, v), 2 * std::log(3.0), 1e-14);
    EXPECT_NEAR(madc_distance(w, v), 2 * std::log(3.0), 1e-14);
    EXPECT_EQ(aitchison_distance(w, w), 0.0);
    EXPECT_EQ(madc_distance(w, w), 0.0);
    EXPECT_THROW(aitchison_distance(w, compdm::close({1, 1, 1})), DimensionMismatch);
    EXPECT_THROW(madc_distance(w, compdm::close({1, 1, 1})), DimensionMismatch);
}

TEST(Distance, AitchisonIsLogRatioEuclidean) {
    std::mt19937_64 rng(51);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rep % 8;
        const auto w = fixtures::random_composition(rng, n);
        const auto v = fixtures::random_composition(rng, n);
        const auto a = log_ratio_transform(w), b = log_ratio_transform(v);
        double s = 0.0, m = 0.0;
        for (std::size_t p = 0; p < a.size(); ++p) {
            s += (a.entries[p] - b.entries[p]) * (a.entries[p] - b.entries[p]);
            m += std::abs(a.entries[p] - b.entries[p]);
        }
        EXPECT_NEAR(aitchison_distance(w, v), std::sqrt(s), 1e-14 * (1 + std::sqrt(s)));
        EXPECT_NEAR(madc_distance(w, v), m, 1e-14 * (1 + m));
    }
}

TEST(Distance, MetricAxioms) {
    std::mt19937_64 rng(52);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 2 + rep % 6;
        const auto a = fixtures::random_composition(rng, n);
        const auto b = fixtures::random_composition(rng, n);
        const auto c = fixtures::random_composition(rng, n);
        for (auto dist : {aitchison_distance, madc_distance}) {
            ASSERT_NEAR(dist(a, b), dist(b, a), 1e-12);
            ASSERT_LE(dist(a, c), dist(a, b) + dist(b, c) + 1e-12);
            ASSERT_GE(dist(a, b), 0.0);
        }
    }
}

TEST(Distance, ScaleAndPermutationInvariant) {
    std::mt19937_64 rng(53);
    for (int rep = 0; rep < 50; ++rep) {
        const auto w = fixtures::random_composition(rng, 5);
        const auto v = fixtures::random_composition(rng, 5);
        auto raw = w.values();
        for (double& x : raw) x *= 3.7;
        EXPECT_NEAR(aitchison_distance(compdm::close(raw), v), aitchison_distance(w, v), 1e-12);
        const std::vector<std::size_t> perm{3, 1, 4, 0, 2};
        std::vector<double> pw, pv;
        for (auto p : perm) {
            pw.push_back(w[p]);
            pv.push_back(v[p]);
        }
        EXPECT_NEAR(aitchison_distance(compdm::close(pw), compdm::close(pv)), aitchison_distance(w, v), 1e-12);
        EXPECT_NEAR(madc_distance(compdm::close(pw), compdm::close(pv)), madc_distance(w, v), 1e-12);
    }
}

TEST(KMeans, TwoBlobsPerfectPurity) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const auto W = fixtures::blobs(rng, kTwoCentres, 15, 0.1);
        for (auto kind : {DistanceKind::Aitchison, DistanceKind::Madc}) {
            const auto m = kmeans_compositional(W, 2, kind, {seed});
            EXPECT_EQ(purity(m.assignments, 15), 1.0) << "seed " << seed;
            for (const auto& c : m.centroids) EXPECT_NEAR(centroid_sum(c), 1.0, 1e-12);
            // Each centroid is its blob's geometric-mean centre, and near the
            // generating composition (sampling error is about 0.09 here).
            for (std::size_t b = 0; b < 2; ++b) {
                std::vector<double> logs(4, 0.0);
                for (std::size_t k = b * 15; k < (b + 1) * 15; ++k)
                    for (std::size_t i = 0; i < 4; ++i) logs[i] += std::log(W(k, i)) / 15.0;
                for (double& v : logs) v = std::exp(v);
                const Composition c(m.centroids[m.assignments[b * 15]]);
                EXPECT_LT(aitchison_distance(c, compdm::close(logs)), 1e-10);
                EXPECT_LT(aitchison_distance(c, compdm::close(kTwoCentres[b])), 0.25);
            }
        }
    }
}

TEST(KMeans, OneClusterPerDm) {
    std::mt19937_64 rng(54);
    const auto W = fixtures::random_matrix(rng, 7, 4);
    const auto m = kmeans_compositional(W, 7, DistanceKind::Aitchison, {3});
    EXPECT_NEAR(m.inertia, 0.0, 1e-20);
    auto sorted = m.assignments;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(sorted[k], k);
}

TEST(KMeans, CentroidsClosedAndTraceMonotone) {
    std::mt19937_64 rng(55);
    for (int rep = 0; rep < 50; ++rep) {
        const auto W = fixtures::random_matrix(rng, 30, 5);
        const auto m = kmeans_compositional(W, 3, DistanceKind::Aitchison, {static_cast<std::uint64_t>(rep)});
        for (const auto& c : m.centroids) ASSERT_NEAR(centroid_sum(c), 1.0, 1e-12);
        for (std::size_t t = 1; t < m.inertia_trace.size(); ++t)
            ASSERT_LE(m.inertia_trace[t], m.inertia_trace[t - 1] * (1 + 1e-12));
        auto sizes = m.cluster_sizes();
        for (auto s : sizes) ASSERT_GT(s, 0u);
        const auto madc = kmeans_compositional(W, 3, DistanceKind::Madc, {static_cast<std::uint64_t>(rep)});
        for (const auto& c : madc.centroids) ASSERT_NEAR(centroid_sum(c), 1.0, 1e-12);
    }
}

TEST(KMeans, MatchesLogRatioKMeans) {
    std::mt19937_64 rng(56);
    for (int rep = 0; rep < 30; ++rep) {
        const auto W = fixtures::random_matrix(rng, 25, 4);
        const std::vector<Composition> init{W.row(0), W.row(5), W.row(11)};
        const auto ours = kmeans_compositional_from(W, init, DistanceKind::Aitchison, 300);

        std::vector<std::vector<double>> pts, starts;
        for (const auto& r : W.rows()) pts.push_back(log_ratio_transform(r).entries);
        for (const auto& c : init) starts.push_back(log_ratio_transform(c).entries);
        const auto plain = plain_kmeans(pts, starts, 300);

        ASSERT_EQ(ours.assignments, plain.assign);
        for (std::size_t c = 0; c < 3; ++c) {
            const auto back = inverse_log_ratio({4, plain.centres[c]});
            for (std::size_t i = 0; i < 4; ++i) ASSERT_NEAR(ours.centroids[c][i], back[i], 1e-10);
        }
    }
}

TEST(KMeans, EmptyClusterIsReseeded) {
    std::mt19937_64 rng(57);
    const auto W = fixtures::random_matrix(rng, 10, 3);
    const auto m = kmeans_compositional_from(W, {W.row(0), W.row(0)});
    EXPECT_GE(m.empty_clusters_resolved, 1u);
    for (auto s : m.cluster_sizes()) EXPECT_GT(s, 0u);
}

TEST(KMeans, DeterministicPerSeed) {
    std::mt19937_64 rng(58);
    const auto W = fixtures::random_matrix(rng, 40, 5);
    const auto a = kmeans_compositional(W, 4, DistanceKind::Aitchison, {9});
    const auto b = kmeans_compositional(W, 4, DistanceKind::Aitchison, {9});
    EXPECT_EQ(a.assignments, b.assignments);
    EXPECT_EQ(a.centroids, b.centroids);
    EXPECT_EQ(a.inertia, b.inertia);
}

TEST(KMeans, Preconditions) {
    const auto W = fixtures::worked_example();
    EXPECT_THROW(kmeans_compositional(W, 6), TooManyClusters);
    EXPECT_THROW(kmeans_compositional(W, 0), TooManyClusters);
    EXPECT_THROW(kmeans_compositional(W, 2, DistanceKind::Euclidean), InputError);
}

TEST(Baseline, ConstantClustersRecoverCompositions) {
    const auto W = PriorityMatrix::from_rows({{0.7, 0.2, 0.1},
                                              {0.7, 0.2, 0.1},
                                              {0.7, 0.2, 0.1},
                                              {0.1, 0.3, 0.6},
                                              {0.1, 0.3, 0.6}});
    const auto m = kmeans_standard_baseline(W, 2, {4});
    EXPECT_TRUE(m.baseline);
    for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(m.centroids[m.assignments[k]][i], W(k, i), 1e-15);
}

TEST(Baseline, ArithmeticAndGeometricCentroidsDiffer) {
    std::mt19937_64 rng(59);
    const auto W = fixtures::blobs(rng, kTwoCentres, 10, 0.6);
    const auto base = kmeans_standard_baseline(W, 2, {1});
    const auto comp = kmeans_compositional(W, 2, DistanceKind::Aitchison, {1});
    EXPECT_EQ(base.distance, DistanceKind::Euclidean);
    double gap = 1e300;
    for (const auto& b : base.centroids)
        for (const auto& c : comp.centroids) {
            double d = 0.0;
            for (std::size_t i = 0; i < b.size(); ++i) d = std::max(d, std::abs(b[i] - c[i]));
            gap = std::min(gap, d);
        }
    EXPECT_GT(gap, 1e-3);
}
