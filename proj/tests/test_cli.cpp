#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "k3fat/cli.hpp"

using namespace k3fat;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("k3fat_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), {}};
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("vdim command") {
    auto r = run({"vdim", "--gamma", "4", "-d", "2", "-m", "4", "-n", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "vdim=-1 edim=-1\n");
    r = run({"vdim", "--gamma", "4", "-d", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "vdim=19 edim=19\n");
    r = run({"vdim", "--gamma", "3", "-d", "2", "-m", "1", "-n", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("gamma must be even") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"vdim"}).code == 2);
    CHECK(run({"vdim", "-d", "x"}).code == 2);
    CHECK(run({"classify", "--gamma", "6", "-d", "2", "-m", "1", "-n", "4"}).code == 2);
    CHECK(run({"classify", "-d", "2", "-m", "1", "-n", "4", "--assume-base"}).code == 2);
    CHECK(run({"classify", "-d", "2", "-m", "1", "-n", "6"}).code == 2);
    CHECK(run({"--trials", "1", "verify", "-d", "2", "-m", "1", "-n", "4"}).code == 2);
}

TEST_CASE("classify command") {
    const auto trace = scratch("trace.json");
    auto r = run({"classify", "--gamma", "4", "-d", "2", "-m", "2", "-n", "4", "--trace", trace.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("status=NONSPECIAL dim=-1") != std::string::npos);
    CHECK(slurp(trace).find("\"regime\": \"NEG\"") != std::string::npos);

    r = run({"classify", "--gamma", "4", "-d", "2", "-m", "2", "-n", "9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("status=UNKNOWN") != std::string::npos);

    r = run({"classify", "--gamma", "6", "-d", "2", "-m", "1", "-n", "4", "--assume-base"});
    CHECK(r.code == 0);
    CHECK(r.out.find("status=CONDITIONAL") != std::string::npos);
}

TEST_CASE("verify command") {
    auto r = run({"verify", "-d", "2", "-m", "2", "-n", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict=AGREE oracle_dim=-1") != std::string::npos);
    r = run({"verify", "-d", "1", "-m", "2", "-n", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict=AGREE oracle_dim=0") != std::string::npos);
    r = run({"verify", "-d", "2", "-m", "2", "-n", "9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict=SKIPPED oracle_dim=") != std::string::npos);
    r = run({"verify", "-d", "3", "-m", "2", "-n", "9", "--budget-rows", "10"});
    CHECK(r.code == 3);
}

TEST_CASE("global flags work before and after the subcommand") {
    const auto a = run({"--seed", "7", "verify", "-d", "3", "-m", "1", "-n", "9"});
    const auto b = run({"verify", "-d", "3", "-m", "1", "-n", "9", "--seed", "7"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run({"--prime", "2147483648", "verify", "-d", "1", "-m", "1", "-n", "1"}).code == 2);
}

TEST_CASE("sweep command") {
    const auto out = scratch("sweep.csv");
    auto r = run({"sweep", "--d-range", "1..4", "--m-range", "1..2", "--n-set", "1,4,9", "--out", out.string()});
    CHECK(r.code == 0);
    const auto table = slurp(out);
    CHECK(line_count(table) == 25);
    CHECK(table.rfind(std::string(cli::kSweepHeader) + "\n", 0) == 0);
    CHECK(table.find("DISAGREE") == std::string::npos);
    CHECK(table.find("4,2,2,9,-18,-1,,UNKNOWN,-1,SKIPPED\n") != std::string::npos);
    CHECK(table.find("4,1,1,1,2,2,2,NONSPECIAL,2,AGREE\n") != std::string::npos);

    r = run({"sweep", "--d-range", "1..2", "--m-range", "1..1", "--n-set", "9,1,4", "--no-oracle"});
    CHECK(r.code == 0);
    CHECK(r.out == std::string(cli::kSweepHeader) + "\n" +
                       "4,1,1,1,2,2,2,NONSPECIAL,,\n"
                       "4,1,1,4,-1,-1,-1,NONSPECIAL,,\n"
                       "4,1,1,9,-6,-1,-1,NONSPECIAL,,\n"
                       "4,2,1,1,8,8,8,NONSPECIAL,,\n"
                       "4,2,1,4,5,5,5,NONSPECIAL,,\n"
                       "4,2,1,9,0,0,0,NONSPECIAL,,\n");

    CHECK(run({"sweep", "--n-set", ""}).code == 2);
    CHECK(run({"sweep", "--n-set", "1,6"}).code == 2);
    CHECK(run({"sweep", "--d-range", "3..2"}).code == 2);
    CHECK(run({"sweep", "--d-range", "a..b"}).code == 2);
    CHECK(run({"sweep", "--n-set", "9", "--budget-rows", "5"}).code == 3);
}

TEST_CASE("sweep output does not depend on thread count") {
    const std::vector<std::string> base{"sweep", "--d-range", "1..5", "--m-range", "1..3", "--n-set", "1,4,9,16"};
    auto one = base;
    one.insert(one.end(), {"--threads", "1"});
    auto four = base;
    four.insert(four.end(), {"--threads", "4"});
    CHECK(run(one).out == run(four).out);
}

TEST_CASE("result cache") {
    const auto dir = scratch("cache");
    cli::GlobalSettings s;
    s.cache_dir = dir.string();
    const auto sys = K3System::homogeneous(4, 3, 2, 4);
    const auto report = classify(sys, BasePolicy::gamma4_proved());
    const auto first = cli::verify_with_cache(sys, report, s);
    CHECK(first.verdict == Verdict::Agree);
    const cli::ResultCache cache(dir);
    const auto entry = cache.load(sys, s);
    REQUIRE(entry);
    CHECK(entry->oracle_dim == 7);
    CHECK(cache.path_for(sys, s).filename() == "g4_d3_m2_n4_p2147483647_s1.txt");

    // a planted entry is served without recomputation
    cache.store(sys, s, {5, false});
    CHECK(cli::verify_with_cache(sys, report, s).verdict == Verdict::Disagree);
    auto other_seed = s;
    other_seed.seed = 2;
    CHECK_FALSE(cache.load(sys, other_seed));
    auto other_trials = s;
    other_trials.trials = 4;
    CHECK_FALSE(cache.load(sys, other_trials));

    const auto r = run({"--cache-dir", dir.string(), "verify", "-d", "3", "-m", "2", "-n", "4"});
    CHECK(r.code == 1);
    CHECK(r.out.find("verdict=DISAGREE oracle_dim=5") != std::string::npos);
}
