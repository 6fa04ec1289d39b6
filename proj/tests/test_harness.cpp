#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hnlab/harness.hpp"

using namespace hnlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config validation") {
    SUBCASE("well-formed defaults validate clean") {
        for (const char* kind : {"schur", "phase", "superres", "lambda", "ball", "demo"})
            CHECK(validate(default_config(kind)).empty());
    }
    SUBCASE("grid that is not a power of two is one violation") {
        nlohmann::json j{{"kind", "phase"}, {"grid", 1000}};
        auto c = config_from_json(j);
        auto v = validate(c);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("grid") != std::string::npos);
    }
    SUBCASE("radius 1.0 is one violation") {
        nlohmann::json j{{"kind", "superres"}, {"radius", 1.0}};
        auto v = validate(config_from_json(j));
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("radius") != std::string::npos);
    }
    SUBCASE("unknown kind rejected") {
        CHECK_THROWS_AS(config_from_json(nlohmann::json{{"kind", "bogus"}}),
                        std::invalid_argument);
    }
    SUBCASE("power-of-two grid accepted through the raw field") {
        nlohmann::json j{{"kind", "phase"}, {"grid", 4096}};
        auto c = config_from_json(j);
        CHECK(c.grid_log2 == 12);
        CHECK(validate(c).empty());
    }
}

TEST_CASE("config json round trip keeps the effective values") {
    auto c = default_config("superres");
    c.seed = 42;
    c.compact_radius = 0.4;
    auto back = config_from_json(to_json(c));
    CHECK(back.kind == c.kind);
    CHECK(back.seed == 42);
    CHECK(back.compact_radius == 0.4);
    CHECK(back.schedule == c.schedule);
    CHECK(back.grid_log2 == c.grid_log2);
}

TEST_CASE("demo run emits csv, summary and manifest") {
    TempDir dir("hnlab_demo_test");
    auto c = default_config("demo");
    c.count = 5;
    c.grid_log2 = 7;
    c.out_dir = (dir.path / "run").string();
    CHECK(run(c) == 0);
    CHECK(fs::exists(fs::path(c.out_dir) / "demo.csv"));
    CHECK(fs::exists(fs::path(c.out_dir) / "demo_summary.json"));
    CHECK(fs::exists(fs::path(c.out_dir) / "manifest.json"));

    std::string csv = slurp(fs::path(c.out_dir) / "demo.csv");
    CHECK(csv.rfind("lambda,sup_f,sup_g\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 rows

    auto manifest = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "manifest.json"));
    CHECK(manifest.at("rows").size() == 5);
    CHECK(manifest.at("version").get<std::string>() == kToolVersion);
    CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
}

TEST_CASE("reruns are byte-identical on csv numerics") {
    TempDir dir("hnlab_det_test");
    for (const char* kind : {"demo", "lambda"}) {
        auto c = default_config(kind);
        c.grid_log2 = 6;
        c.count = 3;
        c.lambda_samples = 1u << 14;
        c.out_dir = (dir.path / (std::string(kind) + "_a")).string();
        REQUIRE(run(c) == 0);
        auto c2 = c;
        c2.out_dir = (dir.path / (std::string(kind) + "_b")).string();
        REQUIRE(run(c2) == 0);
        std::string fa = slurp(fs::path(c.out_dir) / (std::string(kind) + ".csv"));
        std::string fb = slurp(fs::path(c2.out_dir) / (std::string(kind) + ".csv"));
        CHECK(fa == fb);
        CHECK(!fa.empty());
    }
}

TEST_CASE("schur experiment stays inside the certificate") {
    TempDir dir("hnlab_schur_test");
    auto c = default_config("schur");
    c.count = 9;
    c.grid_log2 = 8;
    c.out_dir = (dir.path / "run").string();
    CHECK(run(c) == 0);
    auto summary = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "schur_summary.json"));
    CHECK(summary.at("L").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(summary.at("max_violation").get<double>() <= 0.0);
    CHECK(summary.at("rows").get<int>() == 9 * 5);
}

TEST_CASE("lambda experiment matches the closed form") {
    TempDir dir("hnlab_lambda_test");
    auto c = default_config("lambda");
    c.lambda_samples = 1u << 16;
    c.out_dir = (dir.path / "run").string();
    CHECK(run(c) == 0);
    auto summary = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "lambda_summary.json"));
    CHECK(summary.at("abs_m").get<int>() == 1);
    CHECK(summary.at("slope").get<double>() == doctest::Approx(2.0).epsilon(0.03));
    CHECK(summary.at("c_fit").get<double>() == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("phase experiment emits grid and fourier artifacts") {
    TempDir dir("hnlab_phase_test");
    auto c = default_config("phase");
    c.grid_log2 = 8;
    c.out_dir = (dir.path / "run").string();
    CHECK(run(c) == 0);
    CHECK(fs::exists(fs::path(c.out_dir) / "phase.phg"));
    auto grid = load_phase_grid((fs::path(c.out_dir) / "phase.phg").string());
    CHECK(grid.n == 256);
    auto summary = nlohmann::json::parse(slurp(fs::path(c.out_dir) / "phase_summary.json"));
    CHECK(summary.at("pluriharmonic_pass").get<bool>());
    CHECK(summary.at("g_mean").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(summary.at("reconstruct_at_half_re").get<double>() == doctest::Approx(3.0).epsilon(1e-2));
}

TEST_CASE("math-domain failures return exit code 2") {
    TempDir dir("hnlab_domain_test");
    auto c = default_config("schur");
    c.source = {{"taylor", {{0.0, 0.0}, {2.0, 0.0}}}};  // not Schur data
    c.out_dir = (dir.path / "run").string();
    CHECK(run(c) == 2);
}

TEST_CASE("invalid configs return exit code 1 without artifacts") {
    TempDir dir("hnlab_invalid_test");
    auto c = default_config("superres");
    c.compact_radius = 1.0;
    c.out_dir = (dir.path / "run").string();
    CHECK(run(c) == 1);
    CHECK_FALSE(fs::exists(fs::path(c.out_dir) / "superres.csv"));
}
