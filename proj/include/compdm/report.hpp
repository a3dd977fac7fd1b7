#pragma once

// Run configuration and report structures shared by the CLI, with lossless
// JSON (de)serialization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "compdm/aggregation.hpp"
#include "compdm/clustering.hpp"
#include "compdm/dispersion.hpp"
#include "compdm/hypothesis.hpp"
#include "compdm/io.hpp"

namespace compdm {

enum class OutputFormat { Json, Text, Dot };

constexpr std::string_view to_string(OutputFormat f) noexcept {
    switch (f) {
        case OutputFormat::Json: return "json";
        case OutputFormat::Text: return "text";
        case OutputFormat::Dot: return "dot";
    }
    return "?";
}

struct RunConfig {
    std::string command;
    std::string input;
    ZeroPolicy zero_policy;
    OutputFormat format = OutputFormat::Json;
    std::optional<std::uint64_t> seed;

    // aggregate / describe
    AggregationMethod method = AggregationMethod::Gmm;
    std::size_t max_iter = 500;
    double tol = 1e-10;
    std::optional<double> sigma_denominator;
    double deviant_threshold = 0.01;

    // rank
    RankTest test = RankTest::BayesWilcoxon;
    std::size_t mc_samples = kDefaultMcSamples;
    double prior_strength = 1.0;
    double prior_a = 1.0;
    double prior_b = 1.0;

    // cluster
    std::size_t clusters = 3;
    DistanceKind distance = DistanceKind::Aitchison;
    std::size_t restarts = 10;
    std::size_t kmeans_max_iter = 300;
    bool with_baseline = false;

    AwgmmOptions awgmm() const { return {max_iter, tol, sigma_denominator, false}; }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct Report {
    RunConfig config;
    std::vector<std::string> labels;
    std::optional<AggregationResult> aggregation;
    /// 1-based DM numbers whose lambda is below the deviant threshold.
    std::vector<std::size_t> deviant_dms;
    std::vector<ParetoCheck> pareto;
    std::vector<AverageDeviationArray> describe;
    std::optional<CredalRanking> ranking;
    std::optional<ClusterModel> clusters;
    std::optional<ClusterModel> baseline;
    std::vector<std::string> warnings;
};

// ---------------------------------------------------------------- enums

namespace detail {

template <class E, std::size_t N>
E enum_from(const nlohmann::json& j, const E (&values)[N]) {
    const auto s = j.get<std::string>();
    for (E v : values)
        if (to_string(v) == s) return v;
    throw InputError("unknown enum value: " + s);
}

inline constexpr AggregationMethod kMethods[] = {AggregationMethod::Amm, AggregationMethod::Gmm, AggregationMethod::Awgmm};
inline constexpr RankTest kTests[] = {RankTest::BayesWilcoxon, RankTest::SignTest};
inline constexpr DistanceKind kDistances[] = {DistanceKind::Aitchison, DistanceKind::Madc, DistanceKind::Euclidean};
inline constexpr OutputFormat kFormats[] = {OutputFormat::Json, OutputFormat::Text, OutputFormat::Dot};
inline constexpr AverageKind kAverageKinds[] = {AverageKind::Mean, AverageKind::Median, AverageKind::Awgmm};
inline constexpr Relation kRelations[] = {Relation::Greater, Relation::Less, Relation::EqualRegion};

inline std::string_view deviation_name(DeviationEstimator e) {
    switch (e) {
        case DeviationEstimator::Std: return "std";
        case DeviationEstimator::Mad: return "mad";
        case DeviationEstimator::RobustWeighted: return "robust";
    }
    return "?";
}

inline DeviationEstimator deviation_from(const std::string& s) {
    if (s == "std") return DeviationEstimator::Std;
    if (s == "mad") return DeviationEstimator::Mad;
    if (s == "robust") return DeviationEstimator::RobustWeighted;
    throw InputError("unknown deviation estimator: " + s);
}

template <class Matrix>
nlohmann::json square(const Matrix& m) {
    auto out = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------- config

inline void to_json(nlohmann::json& j, const RunConfig& c) {
    j = nlohmann::json{{"command", c.command},
                       {"input", c.input},
                       {"zero_policy", c.zero_policy.str()},
                       {"format", to_string(c.format)},
                       {"seed", c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr)},
                       {"method", to_string(c.method)},
                       {"max_iter", c.max_iter},
                       {"tol", c.tol},
                       {"sigma_denominator",
                        c.sigma_denominator ? nlohmann::json(*c.sigma_denominator) : nlohmann::json(nullptr)},
                       {"deviant_threshold", c.deviant_threshold},
                       {"test", to_string(c.test)},
                       {"mc_samples", c.mc_samples},
                       {"prior_strength", c.prior_strength},
                       {"prior_a", c.prior_a},
                       {"prior_b", c.prior_b},
                       {"clusters", c.clusters},
                       {"distance", to_string(c.distance)},
                       {"restarts", c.restarts},
                       {"kmeans_max_iter", c.kmeans_max_iter},
                       {"with_baseline", c.with_baseline}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c) {
    c.command = j.at("command").get<std::string>();
    c.input = j.at("input").get<std::string>();
    c.zero_policy = ZeroPolicy::parse(j.at("zero_policy").get<std::string>());
    c.format = detail::enum_from(j.at("format"), detail::kFormats);
    c.seed = j.at("seed").is_null() ? std::nullopt : std::optional(j.at("seed").get<std::uint64_t>());
    c.method = detail::enum_from(j.at("method"), detail::kMethods);
    c.max_iter = j.at("max_iter").get<std::size_t>();
    c.tol = j.at("tol").get<double>();
    c.sigma_denominator =
        j.at("sigma_denominator").is_null() ? std::nullopt : std::optional(j.at("sigma_denominator").get<double>());
    c.deviant_threshold = j.at("deviant_threshold").get<double>();
    c.test = detail::enum_from(j.at("test"), detail::kTests);
    c.mc_samples = j.at("mc_samples").get<std::size_t>();
    c.prior_strength = j.at("prior_strength").get<double>();
    c.prior_a = j.at("prior_a").get<double>();
    c.prior_b = j.at("prior_b").get<double>();
    c.clusters = j.at("clusters").get<std::size_t>();
    c.distance = detail::enum_from(j.at("distance"), detail::kDistances);
    c.restarts = j.at("restarts").get<std::size_t>();
    c.kmeans_max_iter = j.at("kmeans_max_iter").get<std::size_t>();
    c.with_baseline = j.at("with_baseline").get<bool>();
}

// ---------------------------------------------------------------- results

inline nlohmann::json aggregation_json(const AggregationResult& r) {
    nlohmann::json j{{"method", to_string(r.method)},
                     {"weights", r.weights.values()},
                     {"iterations", r.iterations},
                     {"converged", r.converged},
                     {"degenerate_sigma", r.degenerate_sigma}};
    j["lambda"] = r.lambda ? nlohmann::json(*r.lambda) : nlohmann::json(nullptr);
    j["sigma_trace"] = r.sigma_trace;
    return j;
}

inline AggregationResult aggregation_from_json(const nlohmann::json& j) {
    AggregationResult r{Composition(j.at("weights").get<std::vector<double>>()),
                        detail::enum_from(j.at("method"), detail::kMethods),
                        std::nullopt,
                        j.at("iterations").get<std::size_t>(),
                        j.at("converged").get<bool>(),
                        j.at("sigma_trace").get<std::vector<double>>(),
                        j.at("degenerate_sigma").get<bool>()};
    if (!j.at("lambda").is_null()) r.lambda = j.at("lambda").get<std::vector<double>>();
    return r;
}

inline nlohmann::json ad_json(const AverageDeviationArray& ad) {
    return {{"kind", to_string(ad.kind)},
            {"deviation_estimator", detail::deviation_name(ad.deviation.estimator())},
            {"average", detail::square(ad.average)},
            {"deviation", detail::square(ad.deviation)},
            {"combined", detail::square(ad)}};
}

inline AverageDeviationArray ad_from_json(const nlohmann::json& j) {
    const auto avg = j.at("average").get<std::vector<std::vector<double>>>();
    const auto dev = j.at("deviation").get<std::vector<std::vector<double>>>();
    const std::size_t n = avg.size();
    AverageDeviationArray ad{detail::enum_from(j.at("kind"), detail::kAverageKinds), CompositionalAverageArray(n),
                             DeviationArray(n, detail::deviation_from(j.at("deviation_estimator").get<std::string>()))};
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k) {
            ad.average.set_pair(i, k, avg[i][k]);
            ad.deviation.set_pair(i, k, dev[i][k]);
        }
    return ad;
}

inline nlohmann::json ranking_json(const CredalRanking& r, const std::vector<std::string>& labels) {
    auto orderings = nlohmann::json::array();
    for (const auto& o : r.orderings)
        orderings.push_back({{"i", o.i},
                             {"j", o.j},
                             {"criterion_i", labels.at(o.i)},
                             {"criterion_j", labels.at(o.j)},
                             {"relation", to_string(o.relation)},
                             {"d", o.d},
                             {"p_greater", o.p_greater}});
    return {{"test", to_string(r.test)}, {"mc_samples", r.mc_samples}, {"seed", r.seed}, {"orderings", orderings}};
}

inline CredalRanking ranking_from_json(const nlohmann::json& j) {
    CredalRanking r{{}, detail::enum_from(j.at("test"), detail::kTests), j.at("mc_samples").get<std::size_t>(),
                    j.at("seed").get<std::uint64_t>()};
    for (const auto& o : j.at("orderings"))
        r.orderings.push_back({o.at("i").get<std::size_t>(), o.at("j").get<std::size_t>(),
                               detail::enum_from(o.at("relation"), detail::kRelations), o.at("d").get<double>(),
                               o.at("p_greater").get<double>()});
    return r;
}

inline nlohmann::json cluster_json(const ClusterModel& m) {
    std::vector<double> sums;
    for (const auto& c : m.centroids) {
        double s = 0.0;
        for (double v : c) s += v;
        sums.push_back(s);
    }
    return {{"distance", to_string(m.distance)},
            {"baseline", m.baseline},
            {"centroids", m.centroids},
            {"centroid_sums", sums},
            {"cluster_sizes", m.cluster_sizes()},
            {"assignments", m.assignments},
            {"inertia", m.inertia},
            {"inertia_trace", m.inertia_trace},
            {"iterations", m.iterations},
            {"converged", m.converged},
            {"seed", m.seed},
            {"empty_clusters_resolved", m.empty_clusters_resolved}};
}

inline ClusterModel cluster_from_json(const nlohmann::json& j) {
    ClusterModel m;
    m.distance = detail::enum_from(j.at("distance"), detail::kDistances);
    m.baseline = j.at("baseline").get<bool>();
    m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
    m.assignments = j.at("assignments").get<std::vector<std::size_t>>();
    m.inertia = j.at("inertia").get<double>();
    m.inertia_trace = j.at("inertia_trace").get<std::vector<double>>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.converged = j.at("converged").get<bool>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.empty_clusters_resolved = j.at("empty_clusters_resolved").get<std::size_t>();
    return m;
}

inline nlohmann::json report_json(const Report& r) {
    nlohmann::json j{{"config", r.config}, {"labels", r.labels}};
    if (r.aggregation) {
        auto a = aggregation_json(*r.aggregation);
        a["deviant_dms"] = r.deviant_dms;
        auto pareto = nlohmann::json::array();
        for (const auto& p : r.pareto)
            pareto.push_back({{"preferred", p.preferred}, {"other", p.other}, {"preserved", p.preserved}});
        a["pareto"] = pareto;
        j["aggregation"] = a;
    }
    if (!r.describe.empty()) {
        auto d = nlohmann::json::array();
        for (const auto& ad : r.describe) d.push_back(ad_json(ad));
        j["describe"] = d;
    }
    if (r.ranking) j["ranking"] = ranking_json(*r.ranking, r.labels);
    if (r.clusters) j["clusters"] = cluster_json(*r.clusters);
    if (r.baseline) j["baseline"] = cluster_json(*r.baseline);
    j["warnings"] = r.warnings;
    return j;
}

inline Report report_from_json(const nlohmann::json& j) {
    Report r;
    r.config = j.at("config").get<RunConfig>();
    r.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("aggregation")) {
        const auto& a = j.at("aggregation");
        r.aggregation = aggregation_from_json(a);
        r.deviant_dms = a.at("deviant_dms").get<std::vector<std::size_t>>();
        for (const auto& p : a.at("pareto"))
            r.pareto.push_back({p.at("preferred").get<std::size_t>(), p.at("other").get<std::size_t>(),
                                p.at("preserved").get<bool>()});
    }
    if (j.contains("describe"))
        for (const auto& d : j.at("describe")) r.describe.push_back(ad_from_json(d));
    if (j.contains("ranking")) r.ranking = ranking_from_json(j.at("ranking"));
    if (j.contains("clusters")) r.clusters = cluster_from_json(j.at("clusters"));
    if (j.contains("baseline")) r.baseline = cluster_from_json(j.at("baseline"));
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
}

}  // namespace compdm
