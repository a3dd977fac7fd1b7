// compdm: compositional analysis of group decision-maker priorities.
//
//   compdm aggregate --input W.csv --method awgmm
//   compdm describe  --input W.csv --format text
//   compdm rank      --input W.csv --seed 7 --format dot
//   compdm cluster   --input W.csv --seed 7 -k 3 --with-baseline

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "compdm/cli.hpp"

namespace {

template <class E>
std::map<std::string, E> choices(std::initializer_list<E> values) {
    std::map<std::string, E> out;
    for (E v : values) out.emplace(std::string(compdm::to_string(v)), v);
    return out;
}

// Enum options are parsed as their string names.
template <class E>
CLI::Option* enum_option(CLI::App* sub, const std::string& flag, E& target, std::initializer_list<E> values,
                         const std::string& help) {
    const auto names = choices(values);
    return sub
        ->add_option_function<std::string>(
            flag, [&target, names](const std::string& s) { target = names.at(s); }, help)
        ->check(CLI::IsMember(names));
}

}  // namespace

int main(int argc, char** argv) {
    using namespace compdm;

    CLI::App app{"Compositional analysis of decision-maker priorities"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string zero_policy = "reject";
    std::string output;
    std::uint64_t seed = 0;

    auto shared = [&](CLI::App* sub) {
        sub->add_option("-i,--input", cfg.input, "CSV file: header of criterion labels, one DM per row")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--zero-policy", zero_policy, "reject | replace:<eps>")->capture_default_str();
        enum_option(sub, "--format", cfg.format, {OutputFormat::Json, OutputFormat::Text, OutputFormat::Dot},
                    "json | text | dot");
        sub->add_option("--seed", seed, "RNG seed (required for rank with bayes-wilcoxon, and for cluster)");
        sub->add_option("-o,--output", output, "write the report here instead of stdout");
    };
    auto awgmm_flags = [&](CLI::App* sub) {
        sub->add_option("--max-iter", cfg.max_iter, "AWGMM iteration cap")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "AWGMM convergence tolerance (max change in log-ratios)")
            ->capture_default_str();
        sub->add_option("--sigma-denominator", cfg.sigma_denominator, "divisor of the sigma^2 update (default n^2)");
    };

    auto* aggregate = app.add_subcommand("aggregate", "Aggregate priorities (amm | gmm | awgmm)");
    shared(aggregate);
    awgmm_flags(aggregate);
    enum_option(aggregate, "--method", cfg.method,
                {AggregationMethod::Amm, AggregationMethod::Gmm, AggregationMethod::Awgmm}, "amm | gmm | awgmm");
    aggregate->add_option("--deviant-threshold", cfg.deviant_threshold, "flag DMs with lambda below this")
        ->capture_default_str();

    auto* describe = app.add_subcommand("describe", "Average-deviation arrays (mean, median, awgmm)");
    shared(describe);
    awgmm_flags(describe);

    auto* rank = app.add_subcommand("rank", "Credal ranking of criteria");
    shared(rank);
    enum_option(rank, "--test", cfg.test, {RankTest::BayesWilcoxon, RankTest::SignTest}, "bayes-wilcoxon | sign");
    rank->add_option("--mc-samples", cfg.mc_samples, "Monte Carlo samples per pair")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1000}, std::numeric_limits<std::size_t>::max()));
    rank->add_option("--prior-strength", cfg.prior_strength, "weight of the pseudo-observation at zero")
        ->capture_default_str();
    rank->add_option("--prior-a", cfg.prior_a, "sign test Beta prior a")->capture_default_str();
    rank->add_option("--prior-b", cfg.prior_b, "sign test Beta prior b")->capture_default_str();

    auto* cluster = app.add_subcommand("cluster", "Compositional K-means over DMs");
    shared(cluster);
    cluster->add_option("-k,--clusters", cfg.clusters, "number of clusters")->capture_default_str();
    enum_option(cluster, "--distance", cfg.distance, {DistanceKind::Aitchison, DistanceKind::Madc}, "aitchison | madc");
    cluster->add_option("--restarts", cfg.restarts, "seeded restarts; best inertia wins")->capture_default_str();
    cluster->add_option("--max-iter", cfg.kmeans_max_iter, "Lloyd iteration cap")->capture_default_str();
    cluster->add_flag("--with-baseline", cfg.with_baseline, "also run Euclidean K-means on raw priorities");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (app.get_subcommands().front()->count("--seed") > 0) cfg.seed = seed;
        cfg.zero_policy = ZeroPolicy::parse(zero_policy);
        if (cfg.format == OutputFormat::Dot && cfg.command != "rank")
            throw InputError("--format dot is only available for rank");

        const auto data = load_priorities(cfg.input, cfg.zero_policy);
        const auto text = cli::render(cli::run(cfg, data));
        if (output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(output);
            if (!out) throw InputError("cannot write " + output);
            out << text;
        }
        return 0;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
