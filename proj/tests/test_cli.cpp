#include "saito/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace saito;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "saito");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

// Restores an environment variable on scope exit.
class EnvGuard {
public:
    EnvGuard(const char* name, const std::string& value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        setenv(name, value.c_str(), 1);
    }
    ~EnvGuard() {
        if (old_) setenv(name_, old_->c_str(), 1);
        else unsetenv(name_);
    }

private:
    const char* name_;
    std::optional<std::string> old_;
};

fs::path scratch_dir(const char* tag) {
    fs::path p = fs::temp_directory_path() / (std::string("saito_cli_") + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("info and jacobian") {
    auto r = run({"info", "--family", "2", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out.find("mu_f: 3\n") != std::string::npos);
    CHECK(r.out.find("mg: 1/3\n") != std::string::npos);
    CHECK(r.out.find("cg: -1/4\n") != std::string::npos);

    auto j = nlohmann::json::parse(run({"info", "--family", "4", "--k", "4", "--format", "json"}).out);
    CHECK(j["mu_fbar"] == 5);
    CHECK(j["H_g"] == "4*x2");
    CHECK(j["involution"] == true);

    auto nf = run({"jacobian", "--family", "1", "--k", "2", "--elem", "x1^5"});
    CHECK(nf.code == 0);
    CHECK(nf.out.find("normal_form: 0\n") != std::string::npos);
}

TEST_CASE("connection and product table") {
    auto r = run({"connection", "--family", "2", "--k", "2", "--dir", "v_g^0", "--elem", "xi_g"});
    CHECK(r.code == 0);
    CHECK(r.out == "(-2*x1^2*z^-1 - v_id1*z^-1)*xi_id\n");

    auto p = run({"product-table", "--family", "2", "--k", "2"});
    CHECK(p.code == 0);
    CHECK(p.out.find("(xi_g) . (xi_g) = -2*x1^2*xi_id\n") != std::string::npos);
    auto pj = nlohmann::json::parse(run({"product-table", "--family", "1", "--k", "1", "--format", "json"}).out);
    CHECK(pj.size() == 4);
}

TEST_CASE("reduce prints lattice coordinates") {
    auto r = run({"reduce", "--family", "2", "--k", "2", "--elem", "x1^4", "--format", "json"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["certificate"] == true);
}

TEST_CASE("usage and input errors exit with status 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"info", "--family", "6", "--k", "1"}).code == 2);
    CHECK(run({"info", "--family", "4", "--k", "3"}).code == 2);
    CHECK(run({"info", "--family", "all", "--k", "1"}).code == 2);
    CHECK(run({"verify", "--family", "1", "--k", "3", "--k-max", "2"}).code == 2);
    CHECK(run({"verify", "--family", "1", "--k", "1", "--format", "xml"}).code == 2);
    CHECK(run({"connection", "--family", "2", "--k", "2", "--dir", "v_g1", "--elem", "xi_g"}).code == 2);
    auto bad = run({"connection", "--family", "2", "--k", "2", "--dir", "v_g0", "--elem", "x1*xi_id"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("parse error") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify exit status follows the verdicts") {
    auto good = run({"verify", "--family", "2", "--k", "2"});
    CHECK(good.code == 0);
    CHECK(good.out.find("0 failed") != std::string::npos);
    auto bad = run({"verify", "--family", "3", "--k", "1"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL  family 3 k 1  explicit.id_id.at[1,1]") != std::string::npos);
}

TEST_CASE("grid semantics") {
    RunConfig c;
    c.families = {4};
    CHECK(grid(c) == std::vector<std::pair<int, int>>{{4, 4}});
    c.k_max = 6;
    CHECK(grid(c) == std::vector<std::pair<int, int>>{{4, 4}, {4, 5}, {4, 6}});
    c.k = 5;
    CHECK(grid(c) == std::vector<std::pair<int, int>>{{4, 5}, {4, 6}});
    c.families = {};
    c.k = std::nullopt;
    c.k_max = 2;
    CHECK(grid(c).size() == 2 + 2 + 2 + 2);
    c.k_max = 0;
    CHECK_THROWS_AS(grid(c), ConfigError);
}

TEST_CASE("stable reports are deterministic and independent of the job count") {
    std::vector<std::string> args{"verify", "--family", "all", "--k-max", "2", "--stable", "--format", "json"};
    auto a = run(args);
    auto b = run(args);
    args.insert(args.end(), {"--jobs", "4"});
    auto c = run(args);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    CHECK(a.out.find("\"timing\"") == std::string::npos);
    auto timed = run({"verify", "--family", "1", "--k", "1", "--format", "json"});
    CHECK(nlohmann::json::parse(timed.out).contains("timing"));
}

TEST_CASE("report files honour SAITO_OUTPUT_DIR") {
    fs::path dir = scratch_dir("out");
    EnvGuard env("SAITO_OUTPUT_DIR", dir.string());

    auto r = run({"verify", "--family", "1", "--k", "1", "--stable", "--format", "json"});
    CHECK(r.code == 0);
    REQUIRE(fs::exists(dir / "verify.json"));
    CHECK(nlohmann::json::parse(slurp(dir / "verify.json"))["version"] == version);

    run({"verify", "--family", "1", "--k", "1", "--out", "sub/report.txt"});
    CHECK(fs::exists(dir / "sub" / "report.txt"));

    fs::path absolute = dir / "abs.json";
    run({"verify", "--family", "1", "--k", "1", "--format", "json", "--out", absolute.string()});
    CHECK(fs::exists(absolute));
    fs::remove_all(dir);
}

TEST_CASE("golden verification reports") {
    const fs::path golden = SAITO_GOLDEN_DIR;
    const bool regen = std::getenv("SAITO_REGEN_GOLDEN") != nullptr;
    for (auto [f, k] : std::vector<std::pair<int, int>>{{1, 1}, {1, 3}, {2, 2}, {3, 1}, {4, 4}, {5, 1}}) {
        CAPTURE(f);
        CAPTURE(k);
        auto r = run({"verify", "--family", std::to_string(f), "--k", std::to_string(k), "--stable", "--format", "json"});
        fs::path file = golden / ("verify_f" + std::to_string(f) + "_k" + std::to_string(k) + ".json");
        if (regen) {
            fs::create_directories(golden);
            std::ofstream(file, std::ios::binary) << r.out;
        }
        REQUIRE(fs::exists(file));
        CHECK(r.out == slurp(file));
    }
}
