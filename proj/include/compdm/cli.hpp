#pragma once

// Subcommand implementations and output renderers for the compdm tool.

#include <cctype>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>

#include "compdm/report.hpp"

namespace compdm::cli {

inline constexpr const char* kAmmWarning =
    "arithmetic-mean aggregation is shown only as a baseline: averaging raw priorities ignores their "
    "compositional nature and should be avoided; use gmm or awgmm";
inline constexpr const char* kBaselineWarning =
    "baseline K-means uses Euclidean distance and arithmetic-mean centroids on raw priorities; its "
    "centroids need not sum to one";

inline void require_seed(const RunConfig& c) {
    if (!c.seed) throw InputError("--seed is required for " + c.command);
}

inline Report start(const RunConfig& c, const LoadedPriorities& data) {
    Report r;
    r.config = c;
    r.labels = data.matrix.labels();
    r.warnings = data.warnings;
    return r;
}

inline Report cmd_aggregate(const RunConfig& c, const LoadedPriorities& data) {
    Report r = start(c, data);
    const auto& W = data.matrix;
    switch (c.method) {
        case AggregationMethod::Amm:
            r.aggregation = aggregate_amm(W);
            r.warnings.emplace_back(kAmmWarning);
            break;
        case AggregationMethod::Gmm:
            r.aggregation = aggregate_gmm(W);
            break;
        case AggregationMethod::Awgmm:
            if (W.dms() < 2) {
                // A single DM is its own aggregate.
                r.aggregation = aggregate_gmm(W);
                r.aggregation->method = AggregationMethod::Awgmm;
                r.aggregation->lambda = std::vector<double>{1.0};
                r.warnings.emplace_back("awgmm needs at least two decision-makers; returning the single row");
                break;
            }
            r.aggregation = aggregate_awgmm(W, c.awgmm());
            if (!r.aggregation->converged)
                r.warnings.emplace_back("awgmm did not converge within " + std::to_string(c.max_iter) + " iterations");
            for (std::size_t k = 0; k < r.aggregation->lambda->size(); ++k)
                if ((*r.aggregation->lambda)[k] < c.deviant_threshold) r.deviant_dms.push_back(k + 1);
            if (!r.deviant_dms.empty())
                r.warnings.emplace_back("decision-makers with lambda below the deviant threshold differ from the "
                                        "majority and are candidates for negotiation");
            break;
    }
    r.pareto = check_pareto(W, *r.aggregation);
    return r;
}

inline Report cmd_describe(const RunConfig& c, const LoadedPriorities& data) {
    Report r = start(c, data);
    for (auto kind : {AverageKind::Mean, AverageKind::Median, AverageKind::Awgmm})
        r.describe.push_back(average_deviation_array(data.matrix, kind, c.awgmm()));
    return r;
}

inline Report cmd_rank(const RunConfig& c, const LoadedPriorities& data) {
    if (c.test == RankTest::BayesWilcoxon) require_seed(c);
    Report r = start(c, data);
    r.ranking = credal_ranking(data.matrix, {c.test, c.mc_samples, c.seed.value_or(0), c.prior_strength, c.prior_a,
                                             c.prior_b});
    return r;
}

inline Report cmd_cluster(const RunConfig& c, const LoadedPriorities& data) {
    require_seed(c);
    Report r = start(c, data);
    const KMeansOptions opts{*c.seed, c.kmeans_max_iter, c.restarts};
    r.clusters = kmeans_compositional(data.matrix, c.clusters, c.distance, opts);
    if (r.clusters->empty_clusters_resolved > 0)
        r.warnings.push_back("re-seeded " + std::to_string(r.clusters->empty_clusters_resolved) + " empty cluster(s)");
    if (c.with_baseline) {
        r.baseline = kmeans_standard_baseline(data.matrix, c.clusters, opts);
        r.warnings.emplace_back(kBaselineWarning);
    }
    return r;
}

inline Report run(const RunConfig& c, const LoadedPriorities& data) {
    if (c.command == "aggregate") return cmd_aggregate(c, data);
    if (c.command == "describe") return cmd_describe(c, data);
    if (c.command == "rank") return cmd_rank(c, data);
    if (c.command == "cluster") return cmd_cluster(c, data);
    throw InputError("unknown command: " + c.command);
}

// ---------------------------------------------------------------- rendering

namespace detail {

inline std::string fixed(double v, int digits = 3) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

inline bool plain_identifier(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char ch : s)
        if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
    return true;
}

inline std::string dot_id(const std::string& s) {
    if (plain_identifier(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

inline void labelled_matrix(std::ostream& os, const std::vector<std::string>& labels,
                            const std::function<double(std::size_t, std::size_t)>& at) {
    std::size_t width = 8;
    for (const auto& l : labels) width = std::max(width, l.size() + 2);
    os << std::setw(static_cast<int>(width)) << "";
    for (const auto& l : labels) os << std::setw(static_cast<int>(width)) << l;
    os << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        os << std::setw(static_cast<int>(width)) << labels[i];
        for (std::size_t j = 0; j < labels.size(); ++j) os << std::setw(static_cast<int>(width)) << fixed(at(i, j));
        os << '\n';
    }
}

}  // namespace detail

inline std::string render_json(const Report& r) { return report_json(r).dump(2) + "\n"; }

/// One arc per pair from the more likely winner to the loser, labelled with
/// the confidence; pairs in the equal region are dashed.
inline std::string render_dot(const CredalRanking& ranking, const std::vector<std::string>& labels) {
    std::ostringstream os;
    os << "digraph credal {\n";
    for (const auto& l : labels) os << "  " << detail::dot_id(l) << ";\n";
    for (const auto& o : ranking.orderings) {
        os << "  " << detail::dot_id(labels.at(o.winner())) << " -> " << detail::dot_id(labels.at(o.loser()))
           << " [label=\"" << detail::fixed(o.d, 2) << "\"";
        if (in_equal_region(o.d)) os << ", style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

inline std::string render_text(const Report& r) {
    std::ostringstream os;
    const auto& labels = r.labels;
    if (r.aggregation) {
        const auto& a = *r.aggregation;
        os << "method: " << to_string(a.method) << '\n';
        for (std::size_t i = 0; i < labels.size(); ++i)
            os << "  " << labels[i] << ": " << detail::fixed(a.weights[i]) << '\n';
        if (a.lambda) {
            os << "lambda:";
            for (double l : *a.lambda) os << ' ' << detail::fixed(l);
            os << "\niterations: " << a.iterations << (a.converged ? " (converged)" : " (not converged)") << '\n';
            os << "deviant DMs:";
            if (r.deviant_dms.empty()) os << " none";
            for (auto k : r.deviant_dms) os << " DM" << k;
            os << '\n';
        }
    }
    for (const auto& ad : r.describe) {
        os << "AD_" << to_string(ad.kind) << " (average above diagonal, deviation below):\n";
        detail::labelled_matrix(os, labels, [&](std::size_t i, std::size_t j) { return ad(i, j); });
    }
    if (r.ranking) {
        os << "credal ranking (" << to_string(r.ranking->test) << "):\n";
        for (const auto& o : r.ranking->orderings) {
            const bool equal = in_equal_region(o.d);
            os << "  " << labels.at(o.winner()) << (equal ? " = " : " > ") << labels.at(o.loser())
               << "  d=" << detail::fixed(o.d) << '\n';
        }
    }
    auto clusters = [&](const ClusterModel& m, const char* title) {
        os << title << " (" << to_string(m.distance) << "), inertia " << detail::fixed(m.inertia, 6) << ":\n";
        for (std::size_t c = 0; c < m.centroids.size(); ++c) {
            double sum = 0.0;
            os << "  cluster " << c + 1 << " [" << m.cluster_sizes()[c] << " DMs]:";
            for (std::size_t i = 0; i < m.centroids[c].size(); ++i) {
                os << ' ' << labels[i] << '=' << detail::fixed(m.centroids[c][i], 4);
                sum += m.centroids[c][i];
            }
            os << "  sum=" << detail::fixed(sum, 4) << '\n';
        }
    };
    if (r.clusters) clusters(*r.clusters, "compositional K-means");
    if (r.baseline) clusters(*r.baseline, "baseline K-means");
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
    return os.str();
}

inline std::string render(const Report& r) {
    switch (r.config.format) {
        case OutputFormat::Json: return render_json(r);
        case OutputFormat::Text: return render_text(r);
        case OutputFormat::Dot:
            if (!r.ranking) throw InputError("--format dot is only available for rank");
            return render_dot(*r.ranking, r.labels);
    }
    return {};
}

}  // namespace compdm::cli
