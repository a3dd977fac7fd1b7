#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace compdm::detail {

// Sum that does not depend on the order of the inputs: values are sorted
// first, so any permutation of the same multiset gives identical bits.
inline double order_free_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double s = 0.0;
    for (double v : values) s += v;
    return s;
}

inline double order_free_mean(std::vector<double> values) {
    const auto count = static_cast<double>(values.size());
    return order_free_sum(std::move(values)) / count;
}

// Median; an even count averages the two central order statistics.
inline double median(std::vector<double> values) {
    const std::size_t m = values.size();
    const std::size_t mid = m / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (m % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace compdm::detail
