#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "compdm/composition.hpp"

namespace compdm::fixtures {

inline PriorityMatrix worked_example() {
    return PriorityMatrix::from_rows({{0.220, 0.435, 0.295, 0.050},
                                      {0.210, 0.434, 0.312, 0.044},
                                      {0.363, 0.312, 0.107, 0.218},
                                      {0.243, 0.386, 0.332, 0.039},
                                      {0.227, 0.381, 0.339, 0.053}});
}

// Two criteria weighed by 15 DMs; rows are closed on load.
inline PriorityMatrix fifteen_dm_pair() {
    return PriorityMatrix::from_rows({{0.125, 0.243}, {0.143, 0.224}, {0.147, 0.231}, {0.164, 0.209}, {0.197, 0.151},
                                      {0.157, 0.256}, {0.153, 0.232}, {0.115, 0.249}, {0.178, 0.167}, {0.164, 0.183},
                                      {0.175, 0.211}, {0.168, 0.192}, {0.155, 0.251}, {0.126, 0.273}, {0.199, 0.170}});
}

inline Composition random_composition(std::mt19937_64& rng, std::size_t n, double spread = 1.0) {
    std::normal_distribution<double> normal(0.0, spread);
    std::vector<double> raw(n);
    for (double& v : raw) v = std::exp(normal(rng));
    return Composition(std::move(raw));
}

inline PriorityMatrix random_matrix(std::mt19937_64& rng, std::size_t K, std::size_t n, double spread = 1.0) {
    std::vector<Composition> rows;
    for (std::size_t k = 0; k < K; ++k) rows.push_back(random_composition(rng, n, spread));
    return PriorityMatrix(std::move(rows));
}

inline PriorityMatrix random_matrix(std::mt19937_64& rng) {
    const auto K = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    const auto n = std::uniform_int_distribution<std::size_t>(2, 10)(rng);
    return random_matrix(rng, K, n);
}

// Points jittered in log space around `centres`, `per` per centre, in order.
inline PriorityMatrix blobs(std::mt19937_64& rng, const std::vector<std::vector<double>>& centres, std::size_t per,
                            double jitter) {
    std::normal_distribution<double> noise(0.0, jitter);
    std::vector<Composition> rows;
    for (const auto& c : centres)
        for (std::size_t p = 0; p < per; ++p) {
            std::vector<double> raw(c.size());
            for (std::size_t i = 0; i < c.size(); ++i) raw[i] = c[i] * std::exp(noise(rng));
            rows.emplace_back(std::move(raw));
        }
    return PriorityMatrix(std::move(rows));
}

}  // namespace compdm::fixtures
