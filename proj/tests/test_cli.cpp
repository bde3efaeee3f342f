#include "duality/cli.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace duality;
using namespace duality::cli;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "duality_lab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST_CASE("numbers are parsed exactly") {
    CHECK(cli::parse_rational("0.75") == Rational(3, 4));
    CHECK(cli::parse_rational("3/4") == Rational(3, 4));
    CHECK(cli::parse_rational(" -2 ") == Rational(-2));
    CHECK(cli::parse_rational("010/04") == Rational(5, 2));
    CHECK(cli::parse_rational("-0.05") == Rational(-1, 20));
    CHECK_THROWS_AS(cli::parse_rational("abc"), UsageError);
    CHECK_THROWS_AS(cli::parse_rational("1/0"), UsageError);
    CHECK(parse_real("1/4") == 0.25);
    CHECK(parse_integer("12") == 12);
    CHECK_THROWS_AS(parse_integer("1.5"), UsageError);
    CHECK(split_list("1, 2,3") == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("settings are validated before running") {
    auto build = [](json s) { return build_config(s); };
    CHECK_NOTHROW(build({{"command", "verify-duality"}, {"case", "irw-charlier"}, {"c", "1/2"}}));
    CHECK_THROWS_AS(build({{"command", "verify-duality"}, {"c", "-1"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "verify-duality"}, {"phi", "4"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "verify-duality"}, {"case", "nope"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "verify-duality"}, {"colour", "red"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "simulate"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "simulate"}, {"case", "dif-exp"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "simulate"}, {"case", "irw-charlier"}, {"trials", "1"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "verify-algebra"}, {"c", "3/4"}}), UsageError);
    CHECK_THROWS_AS(build({{"command", "frobnicate"}}), UsageError);
    // JSON numbers are read through their decimal text
    const auto cfg = build({{"command", "verify-duality"}, {"c", 0.75}, {"k", json::array({0.5, 1})}});
    CHECK(*cfg.c == Rational(3, 4));
    CHECK(*cfg.k == std::vector<Rational>{Rational(1, 2), Rational(1)});
}

TEST_CASE("exit codes") {
    CHECK(invoke({"verify-duality", "--case", "irw-charlier", "--trunc", "8"}).code == 0);
    CHECK(invoke({"verify-duality", "--case", "no-such-case"}).code == 2);
    CHECK(invoke({"verify-duality", "--c", "0"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"verify-duality", "--bogus"}).code == 2);
    // an unreachable tolerance makes a float check fail
    const auto r = invoke({"verify-duality", "--case", "bep-bessel", "--tolerance", "1e-300", "--grid", "5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("failing checks") != std::string::npos);
}

TEST_CASE("json report layout") {
    const auto r = invoke({"verify-duality", "--case", "sep-krawtchouk"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["command"] == "verify-duality");
    CHECK(doc["status"] == "pass");
    REQUIRE(doc["records"].size() == 2);
    for (const auto& rec : doc["records"]) {
        std::set<std::string> keys;
        for (const auto& [k, v] : rec.items()) keys.insert(k);
        CHECK(keys == std::set<std::string>{"case", "mode", "max_abs_residual", "max_rel_residual", "tolerance", "status",
                                            "wall_time_ms", "seed"});
    }
    CHECK(doc["records"][0]["case"] == "duality/sep-krawtchouk");
    CHECK(doc["records"][0]["mode"] == "exact");
    CHECK(doc["records"][0]["seed"].is_null());
}

TEST_CASE("csv report and file output") {
    const auto path = std::filesystem::temp_directory_path() / "duality_lab_test.csv";
    std::filesystem::remove(path);
    const auto r = invoke({"verify-orthogonality", "--format", "csv", "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "case,mode,max_abs_residual,max_rel_residual,tolerance,status,wall_time_ms,seed");
    std::string line;
    int rows = 0;
    while (std::getline(f, line)) {
        CHECK(line.find(",pass,") != std::string::npos);
        ++rows;
    }
    CHECK(rows >= 12);
}

TEST_CASE("config file with flag overrides") {
    const auto cfg = temp_file("duality_lab_cfg.json",
                               R"({"command": "verify-duality", "case": "irw-charlier", "c": "1/2", "trunc": 6, "format": "json"})");
    const auto a = invoke({"--config", cfg.string()});
    REQUIRE(a.code == 0);
    CHECK(json::parse(a.out)["records"].size() == 2);
    // the subcommand and --format on the command line win over the file
    const auto b = invoke({"verify-duality", "--config", cfg.string(), "--format", "csv", "--no-controls"});
    REQUIRE(b.code == 0);
    CHECK(b.out.rfind("case,mode", 0) == 0);
    CHECK(std::count(b.out.begin(), b.out.end(), '\n') == 2);

    const auto bad = temp_file("duality_lab_bad.json", R"({"command": "verify-duality", "speed": 3})");
    CHECK(invoke({"--config", bad.string()}).code == 2);
    const auto broken = temp_file("duality_lab_broken.json", "{not json");
    CHECK(invoke({"--config", broken.string()}).code == 2);
    CHECK(invoke({"--config", "/nonexistent/cfg.json"}).code == 2);
}

TEST_CASE("case listing is stable") {
    const auto a = invoke({"list-cases"});
    const auto b = invoke({"list-cases"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    for (const auto& ci : dual::catalog()) CHECK(a.out.find(ci.name) != std::string::npos);
    const auto j = invoke({"list-cases", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = json::parse(j.out);
    CHECK(doc.contains("duality"));
}

TEST_CASE("more sites through the command line") {
    CHECK(invoke({"verify-duality", "--case", "sep-krawtchouk", "--sites", "3", "--trunc", "4"}).code == 0);
    CHECK(invoke({"verify-duality", "--case", "sip-meixner", "--sites", "3", "--k", "1,2", "--trunc", "4"}).code == 2);
    CHECK(invoke({"verify-duality", "--case", "sip-meixner", "--sites", "3", "--k", "1/2,1,2", "--trunc", "4"}).code == 0);
}

TEST_CASE("simulate a single case") {
    const auto r = invoke({"simulate", "--case", "irw-charlier", "--trials", "4096", "--seed", "7"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    REQUIRE(doc["simulations"].size() == 1);
    CHECK(doc["records"][0]["seed"] == 7);
    const auto again = invoke({"simulate", "--case", "irw-charlier", "--trials", "4096", "--seed", "7"});
    // wall times differ between runs; the estimates must not
    CHECK(json::parse(again.out)["simulations"] == doc["simulations"]);
}
