#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

std::string g_binary;

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Runs the cellkit binary through the shell, capturing stdout/stderr.
// `env_prefix` may contain shell variable assignments ("VAR=value ").
CommandResult run(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    auto tmp = std::filesystem::temp_directory_path();
    auto out_path = tmp / ("cellkit_cli_out_" + std::to_string(counter));
    auto err_path = tmp / ("cellkit_cli_err_" + std::to_string(counter));
    ++counter;

    std::string cmd = env_prefix + "'" + g_binary + "' " + args + " > '" +
                      out_path.string() + "' 2> '" + err_path.string() + "'";
    int status = std::system(cmd.c_str());

    CommandResult result;
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

std::filesystem::path fresh_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("cellkit_cli_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("kl table dump is byte-frozen at rank 2") {
    auto r = run("kl --rank 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "KLCACHE v1 typeA rank=2 convention=soergel\n"
                   "||0:1\n"
                   "|1|1:1\n"
                   "1|1|0:1\n");
}

TEST_CASE("kl single entries") {
    auto r = run("kl --rank 3 --x '' --y 1,2,1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "3:1\n");

    auto zero = run("kl --rank 3 --x 1 --y 2");
    CHECK(zero.exit_code == 0);
    CHECK(zero.out == "0\n");
}

TEST_CASE("kl row listing is sorted by word") {
    auto r = run("kl --rank 3 --x 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1|1|0:1\n"
                   "1|1,2|1:1\n"
                   "1|1,2,1|2:1\n"
                   "1|2,1|1:1\n");
}

TEST_CASE("kl rejects out-of-range rank") {
    auto r = run("kl --rank 9");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("rank out of supported range") != std::string::npos);
}

TEST_CASE("cells table is frozen at rank 2") {
    auto r = run("cells --rank 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "\t0\t0\t0\t1\n"
                   "1\t1\t1\t1\t1\n");
}

TEST_CASE("cells output is deterministic and well-formed") {
    auto first = run("cells --rank 3 --side left");
    auto second = run("cells --rank 3 --side left");
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);

    auto lines = lines_of(first.out);
    REQUIRE(lines.size() == 6);
    std::set<std::string> ids;
    for (const auto& line : lines) {
        // word \t left_cell_id \t a \t is_duflo
        std::vector<std::string> fields;
        std::istringstream in(line);
        std::string field;
        while (std::getline(in, field, '\t'))
            fields.push_back(field);
        REQUIRE(fields.size() == 4);
        ids.insert(fields[1]);
        CHECK((fields[3] == "0" || fields[3] == "1"));
    }
    CHECK(ids.size() == 4);
}

TEST_CASE("afn modes agree and the slow guard trips") {
    auto exact = run("afn --rank 3 --mode exact");
    auto fast = run("afn --rank 3 --mode fast");
    CHECK(exact.exit_code == 0);
    CHECK(fast.exit_code == 0);
    CHECK(exact.out == fast.out);
    CHECK(exact.out.find("1,2,1\t3\n") != std::string::npos);

    auto guarded = run("afn --rank 6 --mode exact");
    CHECK(guarded.exit_code == 1);
    CHECK(guarded.err.find("i-know-this-is-slow") != std::string::npos);
}

TEST_CASE("duflo listing at rank 3") {
    auto r = run("duflo --rank 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "\t0\n"
                   "1\t1\n"
                   "2\t1\n"
                   "1,2,1\t3\n");
}

TEST_CASE("theta character at rank 2") {
    auto r = run("theta --rank 2 --x 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "\t0:1\n"
                   "1\t-1:1,1:1\n");

    auto bad = run("theta --rank 3 --x junk");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("quasisimple verdict at rank 3") {
    auto r = run("quasisimple --rank 3 --x 1,2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("DUFLO=2\n") != std::string::npos);
    CHECK(r.out.find("degree_bound PASS") != std::string::npos);
    CHECK(r.out.find("symmetry PASS") != std::string::npos);
    CHECK(r.out.find("duflo_minimum PASS") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("propagate from builtins at rank 3") {
    auto r = run("propagate --max-rank 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1,2,1\tpositive\t") != std::string::npos);
    auto lines = lines_of(r.out);
    REQUIRE(!lines.empty());
    CHECK(lines.back() == "positive=4 negative=0 unknown=0");
}

TEST_CASE("report emits parseable json") {
    auto r = run("report --max-rank 3 --format json");
    CHECK(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["rank"] == 3);
    CHECK(doc["totals"]["positive"] == 4);
    CHECK(doc["cells"].size() == 4);
}

TEST_CASE("disk cache round trip via flag") {
    auto dir = fresh_dir("cache_flag");
    auto first = run("kl --rank 3 --cache '" + dir.string() + "'");
    CHECK(first.exit_code == 0);
    CHECK(first.err.find("computed") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "typeA_rank3.klcache"));

    auto second = run("kl --rank 3 --cache '" + dir.string() + "'");
    CHECK(second.exit_code == 0);
    CHECK(second.err.find("loaded from cache") != std::string::npos);
    CHECK(first.out == second.out);
    std::filesystem::remove_all(dir);
}

TEST_CASE("disk cache round trip via environment") {
    auto dir = fresh_dir("cache_env");
    auto r = run("kl --rank 3", "CELLKIT_CACHE_DIR='" + dir.string() + "' ");
    CHECK(r.exit_code == 0);
    CHECK(std::filesystem::exists(dir / "typeA_rank3.klcache"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("no-such-command").exit_code == 1);
    CHECK(run("kl").exit_code == 1);             // missing --rank
    CHECK(run("kl --rank 3 --bogus").exit_code == 1);
}

TEST_CASE("help exits cleanly") {
    auto r = run("--help");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("kl") != std::string::npos);
    CHECK(r.out.find("propagate") != std::string::npos);
}

} // TEST_SUITE

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests [doctest-options] <cellkit-binary>\n");
        return 2;
    }
    g_binary = argv[argc - 1];
    if (!std::filesystem::exists(g_binary)) {
        std::fprintf(stderr, "cli_tests: binary not found: %s\n", g_binary.c_str());
        return 2;
    }
    doctest::Context context;
    context.applyCommandLine(argc - 1, argv);
    return context.run();
}
