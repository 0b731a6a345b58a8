#include "support.hpp"
#include "wftc/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace wftc;
using testsupport::fixture;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("build the sequence net") {
    auto r = run({"build", fixture("empty.wftc"), "--format", "json"});
    CHECK(r.code == kAllTrue);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["stateCount"] == 2);
    CHECK(j["arcCount"] == 1);
}

TEST_CASE("verify exit codes") {
    CHECK(run({"verify", fixture("motivating.wftc"), "--formula", "true"}).code == kAllTrue);
    CHECK(run({"verify", fixture("motivating.wftc"), "--formula-file", fixture("phi2.dctl")}).code == kSomeFalse);
    CHECK(run({"verify", fixture("motivating.wftc"), "--formula", "forall r in R, [r.Salary = empty]"}).code ==
          kUsageError);
    CHECK(run({"verify", fixture("motivating.wftc")}).code == kUsageError);
    CHECK(run({"verify", fixture("missing.wftc"), "--formula", "true"}).code == kUsageError);
    CHECK(run({"build"}).code == kUsageError);
    CHECK(run({"build", fixture("empty.wftc"), "--mode", "sideways"}).code == kUsageError);
}

TEST_CASE("state ceiling from the environment") {
    setenv("WFTC_STATE_LIMIT", "10", 1);
    auto r = run({"build", fixture("motivating.wftc")});
    unsetenv("WFTC_STATE_LIMIT");
    CHECK(r.code == kResourceError);
}

TEST_CASE("metrics report") {
    auto r = run({"metrics", fixture("motivating.wftc")});
    CHECK(r.code == kSomeFalse);
    CHECK(r.out.find("PM5      FALSE") != std::string::npos);
    auto w = run({"metrics", fixture("motivating-wfd.wftc")});
    CHECK(w.out.find("NOT INSTANTIABLE") != std::string::npos);
}

TEST_CASE("report json round-trips and is repeatable") {
    auto a = run({"verify", fixture("motivating.wftc"), "--formula", "EF p13", "--format", "json"});
    auto b = run({"verify", fixture("motivating.wftc"), "--formula", "EF p13", "--format", "json"});
    auto ja = nlohmann::ordered_json::parse(a.out);
    CHECK(ja.dump(2) + "\n" == a.out);
    auto jb = nlohmann::ordered_json::parse(b.out);
    ja.erase("buildMillis");
    jb.erase("buildMillis");
    CHECK(ja == jb);
}

TEST_CASE("exports are written") {
    auto dir = std::filesystem::temp_directory_path() / "wftc_cli_test";
    std::filesystem::create_directories(dir);
    auto dot = (dir / "g.dot").string(), json = (dir / "g.json").string();
    auto r = run({"build", fixture("motivating.wftc"), "--dot", dot, "--json", json});
    CHECK(r.code == kAllTrue);
    CHECK(read_file(dot).rfind("digraph", 0) == 0);
    CHECK(import_json(read_file(json)).states.size() == srg_stats(build_srg(testsupport::load("motivating.wftc"), Mode::Constrained)).state_count);
    std::filesystem::remove_all(dir);
}
