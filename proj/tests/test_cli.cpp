#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "opint/cli/scenarios.hpp"

using namespace opint;
using namespace opint::cli;

namespace {

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no opint::Error thrown";
    return ErrorKind::ConfigError;
}

ScenarioConfig parse(const std::string& text, ScenarioConfig base = {})
{
    std::istringstream in(text);
    return parse_config(in, std::move(base));
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("opint-test-" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST(Config, ParsesSectionsCommentsAndWhitespace)
{
    const ScenarioConfig c = parse(R"(
# comment line
[run]
  scenario = naimark   # trailing comment
seed=12
out = results
[params]
count = 5
[tol]
psd = 1e-9
)");
    EXPECT_EQ(c.scenario, "naimark");
    EXPECT_EQ(c.seed, 12u);
    EXPECT_EQ(c.out_dir, "results");
    EXPECT_EQ(c.params.at("count"), "5");
    EXPECT_DOUBLE_EQ(c.tol.at("psd"), 1e-9);
    EXPECT_DOUBLE_EQ(resolve_tolerances(c).psd, 1e-9);
    EXPECT_DOUBLE_EQ(resolve_tolerances(c).hermitian, Tolerances{}.hermitian);
}

TEST(Config, LaterAssignmentsOverrideEarlierOnes)
{
    ScenarioConfig base = parse("[run]\nscenario = naimark\nseed = 1\n[params]\ncount = 5\n");
    assign(base, "run", "seed", "9");
    assign(base, "params", "count", " 7 ");
    EXPECT_EQ(base.seed, 9u);
    EXPECT_EQ(base.params.at("count"), "7");
}

TEST(Config, RejectsMalformedInput)
{
    EXPECT_EQ(kind_of([] { parse("[run\nscenario = x\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("scenario = x\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[run]\nscenario x\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[run]\n = x\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[run]\ncolour = red\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[misc]\nkey = 1\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[run]\nseed = -3\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[run]\nseed = 3x\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[tol]\nbogus = 1\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { parse("[tol]\npsd = small\n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([] { load_config("/nonexistent/opint.cfg"); }), ErrorKind::IoFailure);
}

TEST(Params, TypedValuesAndDefaults)
{
    const std::vector<ParamSpec> specs{{"n", ParamType::Int, "3", ""},
                                       {"x", ParamType::Real, "0.5", ""},
                                       {"on", ParamType::Bool, "false", ""},
                                       {"name", ParamType::Text, "abc", ""},
                                       {"list", ParamType::RealList, "1, 2.5,4", ""}};
    const Params p(specs, {{"n", "12"}, {"on", "yes"}});
    EXPECT_EQ(p.integer("n"), 12);
    EXPECT_DOUBLE_EQ(p.real("x"), 0.5);
    EXPECT_TRUE(p.flag("on"));
    EXPECT_EQ(p.text("name"), "abc");
    EXPECT_EQ(p.reals("list"), (std::vector<double>{1.0, 2.5, 4.0}));
    EXPECT_EQ(p.echo().at("list"), "1, 2.5,4");
    EXPECT_EQ(kind_of([&] { p.real("n"); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([&] { p.integer("missing"); }), ErrorKind::ConfigError);
}

TEST(Params, RejectsUnknownKeysAndBadValues)
{
    const std::vector<ParamSpec> specs{{"n", ParamType::Int, "3", ""}, {"on", ParamType::Bool, "true", ""}};
    EXPECT_EQ(kind_of([&] { Params(specs, {{"m", "1"}}); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([&] { Params(specs, {{"n", "1.5"}}); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([&] { Params(specs, {{"on", "maybe"}}); }), ErrorKind::ConfigError);
    EXPECT_EQ(kind_of([&] { Params({{"l", ParamType::RealList, "", ""}}, {}); }), ErrorKind::ConfigError);
}

TEST(Registry, CoversEveryCriterionOnce)
{
    std::set<std::string> ids;
    std::map<int, int> owners;
    for (const Scenario& s : registry()) {
        EXPECT_TRUE(ids.insert(s.id).second) << s.id;
        EXPECT_FALSE(s.summary.empty());
        for (int c : s.criteria) ++owners[c];
        // Every declared default must parse.
        EXPECT_NO_THROW(Params(s.params, {})) << s.id;
    }
    EXPECT_EQ(ids.size(), 11u);
    for (int c = 1; c <= 11; ++c) EXPECT_EQ(owners[c], 1) << "criterion " << c;
    EXPECT_EQ(kind_of([] { find_scenario("nope"); }), ErrorKind::ConfigError);
}

TEST(RunScenario, UnknownParameterIsAConfigError)
{
    ScenarioConfig c;
    c.scenario = "naimark";
    c.params["colour"] = "red";
    EXPECT_EQ(kind_of([&] { run_scenario(c); }), ErrorKind::ConfigError);
    c.params.clear();
    c.tol["bogus"] = 1.0;
    EXPECT_EQ(kind_of([&] { run_scenario(c); }), ErrorKind::ConfigError);
}

TEST(RunScenario, ChecksCarryTheirCriterion)
{
    ScenarioConfig c;
    c.scenario = "naimark";
    c.seed = 5;
    c.params["count"] = "6";
    const RunReport r = run_scenario(c);
    EXPECT_TRUE(r.passed());
    EXPECT_FALSE(r.checks.empty());
    int covering = 0;
    for (const Check& ch : r.checks) {
        EXPECT_TRUE(ch.criterion == 0 || ch.criterion == 1) << ch.name; // 0: auxiliary
        covering += ch.criterion == 1;
    }
    EXPECT_GT(covering, 0);
    EXPECT_EQ(r.config.at("params.count"), "6");
    EXPECT_EQ(r.config.at("tol.psd"), format_number(Tolerances{}.psd));
    EXPECT_NO_THROW(require_passed(r));
}

TEST(RunScenario, SummaryIsDeterministicApartFromTheClock)
{
    ScenarioConfig c;
    c.scenario = "bounded-integrals";
    c.seed = 11;
    c.params["trials"] = "10";
    const RunReport a = run_scenario(c);
    const RunReport b = run_scenario(c);
    EXPECT_EQ(summary_json(a, false).dump(), summary_json(b, false).dump());
    ASSERT_EQ(a.tables.size(), b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i) EXPECT_EQ(a.tables[i].rows, b.tables[i].rows);
    c.seed = 12;
    EXPECT_NE(summary_json(run_scenario(c), false).dump(), summary_json(a, false).dump());
}

TEST(RunScenario, FailedChecksAreReported)
{
    RunReport r;
    r.scenario = "demo";
    r.le("small", 0, 2.0, 1.0);
    r.within("range", 0, 0.5, 0.0, 1.0);
    EXPECT_FALSE(r.passed());
    try {
        require_passed(r);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ScenarioFailure);
        const std::string msg = e.what();
        EXPECT_NE(msg.find("small: measured 2 <= 1"), std::string::npos) << msg;
        EXPECT_EQ(msg.find("range"), std::string::npos) << msg;
    }
    EXPECT_EQ(kind_of([&] { r.ge("small", 0, 1.0, 0.0); }), ErrorKind::ConfigError);
}

TEST(Report, NumbersRoundTrip)
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) EXPECT_EQ(std::stod(format_number(v)), v);
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Report, TablesRejectRaggedRows)
{
    RunReport r;
    Table& t = r.table("t", {"a", "b"});
    t.add(1, "x");
    EXPECT_THROW(t.add(1), Error);
    Table& u = r.table("u", {"c"});
    u.add(true);
    EXPECT_EQ(t.rows.size(), 1u); // earlier references survive later tables
    EXPECT_EQ(u.rows[0][0], "true");
}

TEST(Report, EmptyReportWritesOnlyTheSummary)
{
    RunReport r;
    r.scenario = "empty";
    r.seed = 3;
    const auto dir = scratch("empty");
    const auto paths = emit_report(r, dir);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].filename(), "empty-3-summary.json");
    const auto j = nlohmann::json::parse(slurp(paths[0]));
    EXPECT_TRUE(j.at("passed").get<bool>());
    EXPECT_TRUE(j.at("checks").empty());
    EXPECT_TRUE(j.at("artifacts").empty());
    std::filesystem::remove_all(dir);
}

TEST(Report, CsvEscapingAndArtifactNames)
{
    RunReport r;
    r.scenario = "demo";
    r.seed = 42;
    r.table("quotes", {"text", "n"}).add(std::string("a,\"b\""), 2);
    r.truth("ok", 0, true, "note");
    const auto dir = scratch("escape");
    const auto paths = emit_report(r, dir);
    ASSERT_EQ(paths.size(), 2u);
    EXPECT_EQ(paths[0].filename(), "demo-42-quotes.csv");
    EXPECT_EQ(slurp(paths[0]), "text,n\n\"a,\"\"b\"\"\",2\n");
    const auto j = nlohmann::json::parse(slurp(paths[1]));
    EXPECT_EQ(j.at("artifacts"), nlohmann::json::array({"demo-42-quotes.csv"}));
    EXPECT_EQ(j.at("checks")[0].at("note"), "note");
    std::filesystem::remove_all(dir);
}

TEST(Report, BoxMomentsArtifacts)
{
    ScenarioConfig c;
    c.scenario = "box-moments";
    c.seed = 1;
    RunReport r = run_scenario(c);
    EXPECT_TRUE(r.passed());
    const auto dir = scratch("moments");
    const auto paths = emit_report(r, dir);
    std::set<std::string> names;
    for (const auto& p : paths) names.insert(p.filename().string());
    EXPECT_TRUE(names.count("box-moments-1-moments.csv"));
    EXPECT_TRUE(names.count("box-moments-1-moment-horizons.csv"));
    EXPECT_TRUE(names.count("box-moments-1-summary.json"));
    std::istringstream csv(slurp(dir / "box-moments-1-moments.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "state,k,value,status,slope");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    EXPECT_GT(rows, 0);
    std::filesystem::remove_all(dir);
}

TEST(Report, EmitFailsOnUnwritableDirectory)
{
    RunReport r;
    r.scenario = "x";
    const auto dir = scratch("blocked");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "file") << "occupied";
    EXPECT_EQ(kind_of([&] { emit_report(r, dir / "file" / "sub"); }), ErrorKind::IoFailure);
    std::filesystem::remove_all(dir);
}
