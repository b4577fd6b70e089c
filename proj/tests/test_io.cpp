#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "berglab/berglab.hpp"
#include "berglab/config.hpp"

using namespace berglab;

TEST_CASE("number formatting round-trips and is locale-free") {
    for (double v : {1.0, -0.5, 1.0 / 3.0, 1e-300, 6.02214076e23, 0.0}) {
        const std::string s = format_number(v);
        CHECK(std::stod(s) == v);
        CHECK(s.find(',') == std::string::npos);
    }
}

TEST_CASE("checksum is stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
    CHECK(fnv1a_hex("berglab") == fnv1a_hex("berglab"));
}

TEST_CASE("potential key-value round trip") {
    InvariantFunction f;
    f.set_coefficient(0, -0.25);
    f.set_coefficient(2, 0.3);
    f.set_coefficient(5, 1.0 / 7.0);
    const std::string text = potential_to_kv(f);
    std::istringstream in(text);
    const InvariantFunction back = potential_from_kv(in);
    for (int k = 0; k <= 5; ++k) CHECK(back.coefficient(k) == f.coefficient(k));
}

TEST_CASE("potential parse diagnostics") {
    std::istringstream bad("2 0.3\n-1 0.5\n");
    CHECK_THROWS_AS(potential_from_kv(bad), config_error);
}

TEST_CASE("state serialization lists corrections by order") {
    const MomentGrid grid(64);
    ApproxState state = make_state(InvariantMetric::fubini_study(grid));
    inject(state, InvariantFunction::basis(2, 0.25), 1);
    state.level = 1;
    const std::string text = state_to_kv(state);
    CHECK(text.find("level 1") != std::string::npos);
    CHECK(text.find("correction 1 2 0.25") != std::string::npos);
}

TEST_CASE("config parsing") {
    SECTION("full example") {
        std::istringstream in(
            "# demo run\n"
            "potential = 2 0.3\n"
            "potential = 3 0.1\n"
            "m = 16\n"
            "m = 32\n"
            "nodes = 512\n"
            "degree = 48\n"
            "lift = 1/2\n"
            "seed = 42\n"
            "out = runs/demo\n"
            "tol_a1 = 3e-2\n");
        const RunConfig cfg = parse_config(in, "demo");
        REQUIRE(cfg.potential.size() == 2);
        CHECK(cfg.potential[1].first == 3);
        CHECK(cfg.m_list == std::vector<int>{16, 32});
        CHECK(cfg.nodes == 512);
        CHECK(cfg.degree == 48);
        CHECK(cfg.lift == Rational(1, 2));
        CHECK(cfg.seed == 42);
        CHECK(cfg.out_dir == "runs/demo");
        CHECK(cfg.tol_a1 == 3e-2);
    }

    SECTION("diagnostics carry file and line") {
        std::istringstream in("m = 16\nbogus_key = 1\n");
        try {
            parse_config(in, "cfg.txt");
            FAIL("expected config_error");
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find("cfg.txt:2") != std::string::npos);
        }
    }

    SECTION("scalar keys may not repeat") {
        std::istringstream in("nodes = 256\nnodes = 512\n");
        CHECK_THROWS_AS(parse_config(in), config_error);
    }

    SECTION("m list must be strictly increasing") {
        std::istringstream in("m = 16\nm = 8\n");
        const RunConfig cfg = parse_config(in);
        CHECK_THROWS_AS(validate_config(cfg), config_error);
    }

    SECTION("empty m list is rejected where required") {
        const RunConfig cfg;
        CHECK_THROWS_AS(validate_config(cfg), config_error);
    }

    SECTION("inadmissible potential is rejected before computation") {
        std::istringstream in("potential = 2 0.9\nm = 8\n");
        const RunConfig cfg = parse_config(in);
        CHECK_THROWS_AS(metric_from_config(cfg), config_error);
    }
}
