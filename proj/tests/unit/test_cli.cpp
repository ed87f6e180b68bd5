#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

namespace {

const char* cli = LIGHTRAY_CLI_PATH;

int run(const std::string& args) {
    const int rc = std::system((std::string(cli) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("no-such-command") == 2);
    CHECK(run("ray --format yaml") == 2);
    CHECK(run("ray --config /nonexistent/cfg.json") == 2);
}

TEST_CASE("repeated runs are byte identical") {
    write_file("cli_sky.json", R"({"metric": {"name": "perturbed-minkowski", "eps": 0.05},
                                   "sky": {"p": [0.3, 0.1, -0.2], "n": 6}})");
    CHECK(run("sky --config cli_sky.json --out cli_sky_a.json") == 0);
    CHECK(run("sky --config cli_sky.json --out cli_sky_b.json") == 0);
    const std::string a = slurp("cli_sky_a.json");
    CHECK(!a.empty());
    CHECK(a == slurp("cli_sky_b.json"));
}

TEST_CASE("csv output follows the fixed header") {
    write_file("cli_iso.json", R"({"curves": {"mu": {"domain": [-0.5, 0.5],
        "coefficients": [[0, -1, 0, 0, 0, 0, 0],
                         [0, 0, 0, 0, 0, 0, 0],
                         [0, 0, 0, 0, 0, 0, 0]]}},
        "isotopy": {"n": 16, "s_count": 21}})");
    CHECK(run("isotopy --config cli_iso.json --format csv --out cli_iso.csv") == 0);
    const std::string body = slurp("cli_iso.csv");
    CHECK(body.rfind("s,sample_index,value\n", 0) == 0);
    // Commands without a tabular form refuse csv with a usage error.
    CHECK(run("ray --format csv") == 2);
}

TEST_CASE("the example recovery checks pass through the cli") {
    write_file("cli_rec.json", R"({"recover": {"variation": "example-mu",
        "seed": [0.5, 0.0], "s_count": 51}})");
    CHECK(run("recover --config cli_rec.json --out cli_rec.json.out") == 0);
}

}  // TEST_SUITE
