#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "berglab/berglab.hpp"
#include "berglab/commands.hpp"

using namespace berglab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("berglab_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

nlohmann::json load_manifest(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

// every file the manifest references must exist and match its checksum
void check_manifest_outputs(const fs::path& dir) {
    const nlohmann::json manifest = load_manifest(dir);
    for (const auto& entry : manifest["outputs"]) {
        const fs::path file = dir / entry["file"].get<std::string>();
        REQUIRE(fs::exists(file));
        CHECK(fnv1a_hex(read_file(file)) == entry["fnv1a"].get<std::string>());
    }
}

} // namespace

TEST_CASE("density command") {
    TempDir tmp;
    RunConfig cfg;
    cfg.m_list = {2};
    cfg.out_dir = tmp.path.string();

    SECTION("balanced reference: all deviations at rounding level") {
        CHECK(cmd_density(cfg) == kExitPass);
        check_manifest_outputs(tmp.path);
        std::ifstream csv(tmp.path / "density.csv");
        std::string line;
        std::getline(csv, line);
        CHECK(line == "m,x,K,C_q,K_minus_Cq");
        while (std::getline(csv, line)) {
            const auto last_comma = line.rfind(',');
            CHECK(std::fabs(std::stod(line.substr(last_comma + 1))) <= 1e-10);
        }
    }

    SECTION("sup deviation decreases in m for a perturbed metric") {
        cfg.potential = {{2, 0.1}};
        cfg.m_list = {16, 32};
        CHECK(cmd_density(cfg) == kExitPass);
        const nlohmann::json manifest = load_manifest(tmp.path);
        const double d16 = manifest["summary"]["sup_deviation"]["16"].get<double>();
        const double d32 = manifest["summary"]["sup_deviation"]["32"].get<double>();
        CHECK(d32 < d16);
    }

    SECTION("empty m list is a validation error") {
        cfg.m_list = {};
        CHECK_THROWS_AS(cmd_density(cfg), config_error);
    }
}

TEST_CASE("fit command") {
    TempDir tmp;
    RunConfig cfg;
    cfg.out_dir = tmp.path.string();

    SECTION("reference metric: a1 column is one") {
        cfg.m_list = {16, 32, 64};
        CHECK(cmd_fit(cfg) == kExitPass);
        check_manifest_outputs(tmp.path);
        const nlohmann::json manifest = load_manifest(tmp.path);
        CHECK(manifest["summary"]["a1_sup_gap"].get<double>() <= 1e-8);
        std::ifstream csv(tmp.path / "fit.csv");
        std::string line;
        std::getline(csv, line);
        CHECK(line == "x,a1,a2,sigma_half,abs_error");
    }

    SECTION("perturbed metric stays within tolerance") {
        cfg.potential = {{2, 0.01}};
        cfg.m_list = {16, 24, 32, 48, 64};
        CHECK(cmd_fit(cfg) == kExitPass);
        const nlohmann::json manifest = load_manifest(tmp.path);
        CHECK(manifest["summary"]["a1_sup_gap"].get<double>() <= 2e-2);
    }

    SECTION("two powers only: fit error") {
        cfg.m_list = {16, 32};
        CHECK_THROWS_AS(cmd_fit(cfg), fit_error);
    }
}

TEST_CASE("obstruction command") {
    TempDir tmp;
    RunConfig cfg;
    cfg.out_dir = tmp.path.string();
    cfg.m_list = {4, 8, 16};

    SECTION("trace-free lift passes with zero character") {
        CHECK(cmd_obstruction(cfg) == kExitPass);
        check_manifest_outputs(tmp.path);
        std::ifstream csv(tmp.path / "obstruction.csv");
        std::string header;
        std::getline(csv, header);
        CHECK(header ==
              "m,lift_constant,chi,obstruction,weight_identity_gap,character_integral");
        std::string line;
        int rows = 0;
        while (std::getline(csv, line)) {
            ++rows;
            std::istringstream ss(line);
            std::string cell;
            std::getline(ss, cell, ','); // m
            std::getline(ss, cell, ','); // lift constant
            CHECK(cell == "1/2");
            std::getline(ss, cell, ','); // chi
            CHECK(std::fabs(std::stod(cell)) <= 1e-8);
        }
        CHECK(rows == 3);
    }

    SECTION("zero lift fails with the stated reason") {
        cfg.lift = Rational(0, 1);
        CHECK(cmd_obstruction(cfg) == kExitInvariantFailure);
        const nlohmann::json manifest = load_manifest(tmp.path);
        CHECK(manifest["pass"] == false);
        CHECK(manifest["summary"]["reason"] == "nonzero character");
    }

    SECTION("mixed lift constants: hypothesis violation") {
        cfg.lift_at[8] = Rational(1, 3);
        CHECK_THROWS_AS(cmd_obstruction(cfg), hypothesis_error);
    }
}

TEST_CASE("correct command") {
    TempDir tmp;
    RunConfig cfg;
    cfg.out_dir = tmp.path.string();
    cfg.m_list = {16, 24, 32, 48, 64};

    SECTION("injected spoiler is cancelled in one step") {
        cfg.inject = {{2, 0.1}};
        cfg.steps = 1;
        CHECK(cmd_correct(cfg) == kExitPass);
        check_manifest_outputs(tmp.path);
        const nlohmann::json manifest = load_manifest(tmp.path);
        const auto& step0 = manifest["summary"]["steps"][0];
        CHECK(step0["recovery_error"].get<double>() <= 0.1);
        if (step0["slope"].is_number())
            CHECK(step0["slope"].get<double>() >= 2.75);
    }

    SECTION("no injection: recovered correction is nothing") {
        cfg.steps = 1;
        CHECK(cmd_correct(cfg) == kExitPass);
        const nlohmann::json manifest = load_manifest(tmp.path);
        CHECK(manifest["summary"]["steps"][0]["u_sup"].get<double>() <= 1e-8);
    }

    SECTION("zero steps: trace only") {
        cfg.steps = 0;
        CHECK(cmd_correct(cfg) == kExitPass);
        std::ifstream csv(tmp.path / "trace.csv");
        std::string line;
        std::getline(csv, line);
        CHECK(line == "level,m,sup_deviation,slope,v_residual");
        int rows = 0;
        while (std::getline(csv, line)) ++rows;
        CHECK(rows == 5); // one row per power at level 0
    }
}

TEST_CASE("manifest echoes the configuration deterministically") {
    TempDir tmp;
    RunConfig cfg;
    cfg.m_list = {2};
    cfg.out_dir = tmp.path.string();
    REQUIRE(cmd_density(cfg) == kExitPass);
    nlohmann::json first = load_manifest(tmp.path);

    REQUIRE(cmd_density(cfg) == kExitPass);
    nlohmann::json second = load_manifest(tmp.path);

    for (auto* doc : {&first, &second}) {
        doc->erase("started_at");
        doc->erase("finished_at");
    }
    CHECK(first == second);
}
