#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "superint/cli.hpp"

using namespace superint;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("superint_cli_" + name);
}

}  // namespace

TEST_CASE("spectrum JSON schema") {
    auto r = run({"spectrum", "--model", "v1", "--omega", "1", "--k1", "0", "--k2", "1.5", "--sign2", "+", "--n", "2"});
    REQUIRE(r.code == kExitOk);
    auto j = json::parse(r.out);
    for (const char* key : {"model", "params", "n", "states"}) CHECK(j.contains(key));
    CHECK(j["model"] == "v1");
    CHECK(j["n"] == 2);
    REQUIRE(j["states"].size() == 3);
    const double root = std::sqrt(32.0 * (3.0 + 3.0));
    CHECK(j["states"][0]["lambda"].get<double>() == doctest::Approx(-root).epsilon(1e-12));
    CHECK(j["states"][2]["lambda"].get<double>() == doctest::Approx(root).epsilon(1e-12));
    for (auto& s : j["states"]) {
        for (const char* key : {"q", "lambda", "q1", "q2", "coefficients", "zeros"}) CHECK(s.contains(key));
        CHECK(s["coefficients"].size() == 3);
        CHECK(s["q1"].get<int>() + s["q2"].get<int>() == 2);
    }
}

TEST_CASE("sepconst at D^2 = 0 gives the diagonal products") {
    auto r = run({"sepconst", "--model", "v2", "--d2", "0", "--n", "1", "--k1", "1.5", "--k2", "1.5"});
    REQUIRE(r.code == kExitOk);
    auto j = json::parse(r.out);
    auto l = j["lambdas"];
    REQUIRE(l.size() == 2);
    CHECK(l[0].get<double>() == doctest::Approx(-36.0));
    CHECK(l[1].get<double>() == doctest::Approx(-16.0));
}

TEST_CASE("output is byte identical across runs and thread counts") {
    const std::vector<std::string> args = {"gram", "--model", "v2", "--n", "2", "--basis", "elliptic", "--d2", "2"};
    ::setenv("QES_THREADS", "1", 1);
    auto a = run(args);
    ::setenv("QES_THREADS", "3", 1);
    auto b = run(args);
    auto c = run(args);
    ::unsetenv("QES_THREADS");
    REQUIRE(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
    CHECK(a.out.find("-0,") == std::string::npos);
}

TEST_CASE("validation failures exit 2") {
    auto branch = run({"spectrum", "--k2", "0.75", "--sign2", "-"});
    CHECK(branch.code == kExitValidation);
    CHECK(branch.err.find("k >= 1/2") != std::string::npos);

    auto bad_number = run({"spectrum", "--omega", "one"});
    CHECK(bad_number.code == kExitValidation);

    auto unknown = run({"spectrum", "--colour", "red"});
    CHECK(unknown.code == kExitValidation);
    CHECK(unknown.err.find("valid keys") != std::string::npos);

    CHECK(run({}).code == kExitValidation);
    CHECK(run({"spectrum", "--model", "v3"}).code == kExitValidation);
    CHECK(run({"spectrum", "--format", "xml"}).code == kExitValidation);
}

TEST_CASE("config files") {
    const auto path = temp_file("config.txt");
    {
        std::ofstream f(path);
        f << "# level two of the parabolic model\n"
          << "model = v1\n"
          << "omega = 2   # doubled\n"
          << "n = 2\n";
    }
    auto from_file = run({"spectrum", "--config", path.string()});
    REQUIRE(from_file.code == kExitOk);
    CHECK(json::parse(from_file.out)["params"]["omega"] == 2.0);

    auto flag_wins = run({"spectrum", "--config", path.string(), "--omega", "1"});
    REQUIRE(flag_wins.code == kExitOk);
    CHECK(json::parse(flag_wins.out)["params"]["omega"] == 1.0);
    CHECK(json::parse(flag_wins.out)["n"] == 2);

    {
        std::ofstream f(path);
        f << "model = v1\nflavour = 3\n";
    }
    auto unknown = run({"spectrum", "--config", path.string()});
    CHECK(unknown.code == kExitValidation);
    CHECK(unknown.err.find("valid keys") != std::string::npos);
    std::filesystem::remove(path);

    CHECK(run({"spectrum", "--config", temp_file("missing.txt").string()}).code == kExitIo);
}

TEST_CASE("files and summaries") {
    const auto path = temp_file("wavefn.csv");
    auto r = run({"wavefn", "--model", "v1", "--n", "1", "--q1", "1", "--q2", "0", "--basis", "parabolic", "--grid", "4",
                  "--out", path.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("wavefn") != std::string::npos);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header == "u1,u2,x,y,value");
    int rows = 0;
    for (std::string line; std::getline(f, line);) ++rows;
    CHECK(rows == 16);
    std::filesystem::remove(path);

    auto unwritable = run({"spectrum", "--out", "/nonexistent-dir/x.json"});
    CHECK(unwritable.code == kExitIo);
}

TEST_CASE("numerical failures exit 3") {
    // Zeros of a degree-60 polynomial in the monomial basis are beyond double precision.
    auto r = run({"spectrum", "--model", "v1", "--n", "60"});
    CHECK(r.code == kExitNumerical);
}

TEST_CASE("every command runs") {
    const std::vector<std::vector<std::string>> cmds = {
        {"eigvec", "--n", "2", "--q", "1"},
        {"interbasis", "--n", "2"},
        {"niven", "--n", "3"},
        {"limits", "--model", "v2", "--n", "1", "--kind", "d0"},
        {"oracle", "--model", "v1", "--n", "1", "--axis", "real"},
        {"asymptotics", "--model", "v1"},
    };
    for (const auto& c : cmds) {
        auto r = run(c);
        INFO(c[0], " ", r.err);
        CHECK(r.code == kExitOk);
        CHECK_NOTHROW((void)json::parse(r.out));
    }
}
