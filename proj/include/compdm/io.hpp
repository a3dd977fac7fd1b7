#pragma once

// CSV ingestion: first line criterion labels, then one DM per line.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "compdm/composition.hpp"

namespace compdm {

struct ZeroPolicy {
    enum class Kind { Reject, Replace };
    Kind kind = Kind::Reject;
    double eps = 1e-6;

    static ZeroPolicy reject() { return {}; }
    static ZeroPolicy replace(double eps = 1e-6) { return {Kind::Replace, eps}; }

    /// "reject", "replace" or "replace:<eps>".
    static ZeroPolicy parse(std::string_view text) {
        if (text == "reject") return reject();
        if (text == "replace") return replace();
        constexpr std::string_view prefix = "replace:";
        if (text.substr(0, prefix.size()) == prefix) {
            const auto rest = text.substr(prefix.size());
            double eps = 0.0;
            const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), eps);
            if (ec != std::errc{} || ptr != rest.data() + rest.size() || !(eps > 0.0))
                throw InputError("invalid zero-policy epsilon: " + std::string(rest));
            return replace(eps);
        }
        throw InputError("invalid zero-policy: " + std::string(text));
    }

    std::string str() const {
        if (kind == Kind::Reject) return "reject";
        std::ostringstream os;
        os.precision(17);
        os << "replace:" << eps;
        return os.str();
    }

    friend bool operator==(const ZeroPolicy&, const ZeroPolicy&) = default;
};

struct LoadedPriorities {
    PriorityMatrix matrix;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace detail

/// Parses priorities from a CSV stream. Rows whose sum is off by more than
/// 1e-6 are re-closed with a warning.
inline LoadedPriorities parse_priorities(std::istream& in, ZeroPolicy policy = {}) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> labels;
    while (labels.empty() && std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (lineno == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
        if (detail::trim(view).empty()) continue;
        for (auto f : detail::split_commas(view)) {
            if (f.empty()) throw ParseError(lineno, "empty criterion label");
            labels.emplace_back(f);
        }
    }
    if (labels.empty()) throw ParseError(lineno, "missing header row");
    if (labels.size() < 2) throw ParseError(lineno, "need at least two criteria");

    std::vector<Composition> rows;
    std::vector<std::string> warnings;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_commas(line);
        if (fields.size() != labels.size()) throw RaggedRow(lineno, labels.size(), fields.size());
        std::vector<double> raw(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto f = fields[c];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), raw[c]);
            if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(raw[c]))
                throw ParseError(lineno, "not a number: '" + std::string(f) + "'");
            if (raw[c] < 0.0) throw NonPositiveEntry(lineno, c + 1);
            if (raw[c] == 0.0) {
                if (policy.kind == ZeroPolicy::Kind::Reject) throw NonPositiveEntry(lineno, c + 1);
                raw[c] = policy.eps;
                warnings.push_back("line " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                                   ": zero replaced by " + policy.str().substr(8));
            }
        }
        double total = 0.0;
        for (double v : raw) total += v;
        if (std::abs(total - 1.0) > 1e-6) {
            std::ostringstream os;
            os.precision(6);
            os << "line " << lineno << ": row sums to " << total << "; re-normalized";
            warnings.push_back(os.str());
        }
        rows.emplace_back(std::move(raw));
    }
    if (rows.empty()) throw ParseError(lineno, "no decision-maker rows");
    return {PriorityMatrix(std::move(rows), std::move(labels)), std::move(warnings)};
}

inline LoadedPriorities load_priorities(const std::string& path, ZeroPolicy policy = {}) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return parse_priorities(in, policy);
}

}  // namespace compdm
