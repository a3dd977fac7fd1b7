#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "compdm/cli.hpp"
#include "support.hpp"

using namespace compdm;
namespace fs = std::filesystem;

namespace {

LoadedPriorities parse(const std::string& text, ZeroPolicy policy = {}) {
    std::istringstream in(text);
    return parse_priorities(in, policy);
}

struct Outcome {
    int status = -1;
    std::string out;
};

Outcome run_cli(const std::string& args) {
    const std::string cmd = std::string(COMPDM_CLI) + " " + args + " 2>/dev/null";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return o;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, got);
    const int raw = pclose(pipe);
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return o;
}

std::string data(const std::string& name) { return std::string(COMPDM_DATA_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = fs::temp_directory_path() / ("compdm_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

RunConfig config(const std::string& command) {
    RunConfig c;
    c.command = command;
    c.input = "in.csv";
    return c;
}

}  // namespace

TEST(Csv, LoadsWorkedExample) {
    const auto loaded = load_priorities(data("worked_example.csv"));
    const auto expected = fixtures::worked_example();
    ASSERT_EQ(loaded.matrix.dms(), 5u);
    for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(loaded.matrix(k, i), expected(k, i));
    EXPECT_TRUE(loaded.warnings.empty());
}

TEST(Csv, RenormalizesWithWarning) {
    const auto loaded = parse("a,b,c\n0.2,0.3,0.499\n");
    ASSERT_EQ(loaded.warnings.size(), 1u);
    EXPECT_NE(loaded.warnings[0].find("re-normalized"), std::string::npos);
    EXPECT_NEAR(loaded.matrix.row(0).sum(), 1.0, 1e-15);
    EXPECT_EQ(loaded.matrix.labels(), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Csv, ToleratesBomBlankLinesAndSpaces) {
    const auto loaded = parse("\xEF\xBB\xBF" "x , y\r\n\n 0.25, 0.75 \r\n\n0.5,0.5\n");
    EXPECT_EQ(loaded.matrix.dms(), 2u);
    EXPECT_EQ(loaded.matrix.labels()[0], "x");
    EXPECT_EQ(loaded.matrix(0, 1), 0.75);
}

TEST(Csv, ZeroPolicy) {
    try {
        parse("a,b\n0.5,0.5\n1.0,0\n");
        FAIL();
    } catch (const NonPositiveEntry& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.index(), 2u);
    }
    const auto replaced = parse("a,b\n1.0,0\n", ZeroPolicy::replace(1e-4));
    EXPECT_NEAR(replaced.matrix(0, 1), 1e-4 / (1.0 + 1e-4), 1e-15);
    EXPECT_EQ(replaced.warnings.size(), 2u);
    EXPECT_THROW(parse("a,b\n-0.5,1.5\n", ZeroPolicy::replace()), NonPositiveEntry);
}

TEST(Csv, MalformedInput) {
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("a\n1\n"), ParseError);
    EXPECT_THROW(parse("a,b\n"), ParseError);
    EXPECT_THROW(parse("a,b\n0.5,x\n"), ParseError);
    EXPECT_THROW(parse("a,b\n0.5,\n"), ParseError);
    EXPECT_THROW(parse("a,b\n0.5,0.5,0.1\n"), RaggedRow);
    try {
        parse("a,b\n0.5,0.5\n0.5\n");
        FAIL();
    } catch (const RaggedRow& e) {
        EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
    }
    EXPECT_THROW(load_priorities("/nonexistent/file.csv"), InputError);
}

TEST(ZeroPolicyParse, Forms) {
    EXPECT_EQ(ZeroPolicy::parse("reject").kind, ZeroPolicy::Kind::Reject);
    EXPECT_EQ(ZeroPolicy::parse("replace").eps, 1e-6);
    EXPECT_EQ(ZeroPolicy::parse("replace:0.001").eps, 0.001);
    EXPECT_EQ(ZeroPolicy::parse(ZeroPolicy::replace(2.5e-7).str()).eps, 2.5e-7);
    EXPECT_THROW(ZeroPolicy::parse("replace:-1"), InputError);
    EXPECT_THROW(ZeroPolicy::parse("replace:abc"), InputError);
    EXPECT_THROW(ZeroPolicy::parse("drop"), InputError);
}

TEST(Commands, AggregateGmmAndAwgmm) {
    const LoadedPriorities data{fixtures::worked_example(), {}};
    auto c = config("aggregate");
    const auto gmm = cli::run(c, data);
    const double expected[] = {0.260, 0.405, 0.269, 0.066};
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(gmm.aggregation->weights[i], expected[i], 1e-3);
    EXPECT_TRUE(gmm.warnings.empty());

    c.method = AggregationMethod::Awgmm;
    const auto awgmm = cli::run(c, data);
    EXPECT_EQ(awgmm.deviant_dms, std::vector<std::size_t>{3});
    EXPECT_FALSE(awgmm.pareto.empty());

    c.method = AggregationMethod::Amm;
    const auto amm = cli::run(c, data);
    ASSERT_FALSE(amm.warnings.empty());
    EXPECT_NE(amm.warnings[0].find("should be avoided"), std::string::npos);
}

TEST(Commands, SingleDmAnyMethod) {
    const LoadedPriorities data{PriorityMatrix::from_rows({{0.2, 0.5, 0.3}}), {}};
    auto c = config("aggregate");
    for (auto m : {AggregationMethod::Amm, AggregationMethod::Gmm, AggregationMethod::Awgmm}) {
        c.method = m;
        const auto r = cli::run(c, data);
        for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.aggregation->weights[i], data.matrix(0, i), 1e-15);
    }
}

TEST(Commands, DescribeIdenticalRows) {
    const LoadedPriorities data{PriorityMatrix::from_rows({{0.2, 0.5, 0.3}, {0.2, 0.5, 0.3}}), {}};
    const auto r = cli::run(config("describe"), data);
    ASSERT_EQ(r.describe.size(), 3u);
    for (const auto& ad : r.describe)
        for (std::size_t i = 1; i < 3; ++i)
            for (std::size_t j = 0; j < i; ++j) EXPECT_NEAR(ad(i, j), 0.0, 1e-14);
}

TEST(Commands, DescribeWorkedExample) {
    const auto r = cli::run(config("describe"), {fixtures::worked_example(), {}});
    EXPECT_NEAR(r.describe[0](0, 1), -0.44737623, 1e-8);
    EXPECT_NEAR(r.describe[0](1, 0), 0.35222456, 1e-8);
}

TEST(Commands, SeedRequired) {
    const LoadedPriorities data{fixtures::worked_example(), {}};
    EXPECT_THROW(cli::run(config("rank"), data), InputError);
    EXPECT_THROW(cli::run(config("cluster"), data), InputError);
    auto sign = config("rank");
    sign.test = RankTest::SignTest;
    EXPECT_NO_THROW(cli::run(sign, data));
    EXPECT_THROW(cli::run(config("bogus"), data), InputError);
}

TEST(Commands, ClusterWithBaseline) {
    std::mt19937_64 rng(61);
    const LoadedPriorities data{fixtures::blobs(rng, {{0.6, 0.3, 0.1}, {0.1, 0.3, 0.6}}, 8, 0.1), {}};
    auto c = config("cluster");
    c.seed = 5;
    c.clusters = 2;
    c.with_baseline = true;
    const auto r = cli::run(c, data);
    ASSERT_TRUE(r.clusters && r.baseline);
    EXPECT_TRUE(r.baseline->baseline);
    EXPECT_FALSE(r.warnings.empty());
    c.clusters = 16;
    EXPECT_NEAR(cli::run(c, data).clusters->inertia, 0.0, 1e-20);
}

TEST(Render, DotGraph) {
    const LoadedPriorities data{fixtures::fifteen_dm_pair(), {}};
    auto c = config("rank");
    c.seed = 1;
    const auto dot = cli::render_dot(*cli::run(c, data).ranking, data.matrix.labels());
    EXPECT_EQ(dot.rfind("digraph credal {", 0), 0u);
    EXPECT_NE(dot.find("c2 -> c1 [label=\""), std::string::npos);

    const LoadedPriorities flat{PriorityMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}), {}};
    const auto equal = cli::render_dot(*cli::run(c, flat).ranking, {"x", "my label"});
    EXPECT_NE(equal.find("x -> \"my label\" [label=\"0.50\", style=dashed];"), std::string::npos);
}

TEST(Render, TextLayout) {
    auto c = config("describe");
    c.format = OutputFormat::Text;
    const auto text = cli::render(cli::run(c, {fixtures::worked_example(), {}}));
    EXPECT_NE(text.find("AD_mean"), std::string::npos);
    EXPECT_NE(text.find("-0.447"), std::string::npos);
    EXPECT_NE(text.find("0.352"), std::string::npos);
    c.format = OutputFormat::Dot;
    EXPECT_THROW(cli::render(cli::run(c, {fixtures::worked_example(), {}})), InputError);
}

TEST(ReportJson, RoundTripsEveryCommand) {
    const LoadedPriorities data{fixtures::worked_example(), {"a warning"}};
    std::vector<RunConfig> configs;
    for (auto m : {AggregationMethod::Amm, AggregationMethod::Gmm, AggregationMethod::Awgmm}) {
        auto c = config("aggregate");
        c.method = m;
        c.sigma_denominator = 16.0;
        c.zero_policy = ZeroPolicy::replace(1e-5);
        configs.push_back(c);
    }
    configs.push_back(config("describe"));
    for (auto t : {RankTest::BayesWilcoxon, RankTest::SignTest}) {
        auto c = config("rank");
        c.test = t;
        c.seed = 0xFFFFFFFFFFFFFFFFull;
        c.mc_samples = 2000;
        configs.push_back(c);
    }
    auto cl = config("cluster");
    cl.seed = 3;
    cl.clusters = 2;
    cl.with_baseline = true;
    cl.distance = DistanceKind::Madc;
    configs.push_back(cl);

    for (const auto& c : configs) {
        const auto report = cli::run(c, data);
        const auto text = cli::render_json(report);
        const auto back = report_from_json(nlohmann::json::parse(text));
        EXPECT_EQ(back.config, report.config) << c.command;
        EXPECT_EQ(cli::render_json(back), text) << c.command;
    }
}

TEST(Cli, AggregateJson) {
    const auto r = run_cli("aggregate --input " + data("worked_example.csv") + " --method awgmm");
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["aggregation"]["weights"][1].get<double>(), 0.410, 1e-3);
    EXPECT_EQ(j["aggregation"]["deviant_dms"], nlohmann::json::array({3}));
    EXPECT_EQ(j["config"]["method"], "awgmm");
}

TEST(Cli, DescribeText) {
    const auto r = run_cli("describe --input " + data("worked_example.csv") + " --format text");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("AD_median"), std::string::npos);
}

TEST(Cli, RankDot) {
    const auto r = run_cli("rank --input " + data("two_criteria_15dm.csv") + " --seed 7 --format dot");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("digraph credal {", 0), 0u);
    EXPECT_NE(r.out.find("c2 -> c1"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli("aggregate --input /nonexistent.csv").status, 2);
    EXPECT_EQ(run_cli("rank --input " + data("worked_example.csv")).status, 2);
    EXPECT_EQ(run_cli("aggregate --input " + data("worked_example.csv") + " --format dot").status, 2);
    EXPECT_EQ(run_cli("frobnicate").status, 2);
    const auto zero = write_temp("zero.csv", "a,b\n0.5,0.5\n1,0\n");
    EXPECT_EQ(run_cli("aggregate --input " + zero).status, 2);
    EXPECT_EQ(run_cli("aggregate --input " + zero + " --zero-policy replace:1e-6").status, 0);
    const auto ties = write_temp("ties.csv", "a,b\n0.5,0.5\n0.5,0.5\n");
    EXPECT_EQ(run_cli("rank --input " + ties + " --test sign").status, 0);
    const auto many = run_cli("cluster --input " + data("worked_example.csv") + " --seed 1 -k 9");
    EXPECT_EQ(many.status, 2);
}

TEST(Cli, OutputFile) {
    const auto path = (fs::temp_directory_path() / "compdm_test_out.json").string();
    fs::remove(path);
    const auto r = run_cli("aggregate --input " + data("worked_example.csv") + " -o " + path);
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    EXPECT_NO_THROW(nlohmann::json::parse(in));
}

TEST(Cli, ByteIdenticalReruns) {
    const std::string rank = "rank --input " + data("worked_example.csv") + " --seed 42";
    const std::string cluster = "cluster --input " + data("worked_example.csv") + " --seed 42 -k 2 --with-baseline";
    for (const auto& args : {rank, cluster}) {
        const auto a = run_cli(args), b = run_cli(args);
        ASSERT_EQ(a.status, 0) << args;
        EXPECT_EQ(a.out, b.out) << args;
    }
}
