#include <cmath>
#include <string>

#include "doctest.h"
#include "wchaos/config.hpp"
#include "wchaos/expr.hpp"

using namespace wchaos;

TEST_CASE("expression arithmetic and precedence") {
    CHECK(parse_expr("2+3*4")(0, 0) == doctest::Approx(14.0));
    CHECK(parse_expr("(2+3)*4")(0, 0) == doctest::Approx(20.0));
    CHECK(parse_expr("2^3^2")(0, 0) == doctest::Approx(512.0));  // right associative
    CHECK(parse_expr("-2^2")(0, 0) == doctest::Approx(-4.0));
    CHECK(parse_expr("7/2/2")(0, 0) == doctest::Approx(1.75));
    CHECK(parse_expr("1 - 2 - 3")(0, 0) == doctest::Approx(-4.0));
}

TEST_CASE("expression variables and functions") {
    auto e = parse_expr("1 + 0.2*sin(x)");
    CHECK(e.uses_x);
    CHECK_FALSE(e.uses_t);
    CHECK(e(0.0, 1.5) == doctest::Approx(1.0 + 0.2 * std::sin(1.5)));

    auto f = parse_expr("exp(-x^2/2)*cos(t)");
    CHECK(f.uses_x);
    CHECK(f.uses_t);
    CHECK(f(0.3, 1.1) == doctest::Approx(std::exp(-1.1 * 1.1 / 2) * std::cos(0.3)));
}

TEST_CASE("expression errors carry position") {
    CHECK_THROWS_AS(parse_expr("2+"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expr("foo(1)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expr("sin 3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expr("1 2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_expr("(1+2"), std::invalid_argument);
    try {
        parse_expr("1+@");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("position 2") != std::string::npos);
    }
}

TEST_CASE("presets") {
    const auto cfg = preset_config("paper-example");
    CHECK(cfg.preset == "paper-example");
    CHECK(cfg.prop.N == 6);
    CHECK(cfg.prop.K == 16);
    CHECK(cfg.prop.grid.mode == GridMode::PeriodicSpectral);
    CHECK(cfg.prop.coeffs.a(0.3, 1.2) == doctest::Approx(1.0));
    CHECK(cfg.prop.coeffs.rho(0.0, 0.0) == doctest::Approx(1.0));

    const auto vc = preset_config("full2nd-varcoeff");
    CHECK(vc.prop.grid.mode == GridMode::BoundedFiniteDifference);
    CHECK(vc.prop.coeffs.a(0.0, 0.5) == doctest::Approx(1.0 + 0.2 * std::sin(0.5)));
    CHECK(vc.prop.coeffs.rho(0.0, 0.0) == doctest::Approx(0.5));

    CHECK_THROWS_AS(preset_config("nope"), ConfigError);
}

TEST_CASE("config parsing and validation") {
    const std::string good = R"({
        "equation": {"preset": "paper-example"},
        "grid": {"n_x": 64, "L": 10.0},
        "time": {"T": 0.5, "dt": 0.01},
        "truncation": {"N": 3, "K": 4},
        "weights": [[0, 0], [-2, -2]],
        "output": {"dir": "outdir", "format": "json"},
        "mc": {"paths": 1000, "steps": 100, "seed": 7}
    })";
    const auto cfg = parse_config_text(good);
    CHECK(cfg.prop.grid.n_x == 64);
    CHECK(cfg.prop.grid.L == doctest::Approx(10.0));
    CHECK(cfg.prop.interval.T == doctest::Approx(0.5));
    CHECK(cfg.prop.interval.n_t == 50);
    CHECK(cfg.prop.N == 3);
    CHECK(cfg.prop.K == 4);
    REQUIRE(cfg.weights.size() == 2);
    CHECK(cfg.weights[1].p == doctest::Approx(-2.0));
    CHECK(cfg.out_dir == "outdir");
    CHECK(cfg.format == "json");
    CHECK(cfg.mc.paths == 1000);
    CHECK(cfg.mc.seed == 7);
    CHECK_FALSE(cfg.config_hash.empty());
    CHECK(parse_config_text(good).config_hash == cfg.config_hash);

    // identical content hashes identically; different content differently
    const auto other = parse_config_text(R"({"equation": {"preset": "paper-example"}})");
    CHECK(other.config_hash != cfg.config_hash);
}

TEST_CASE("config rejects unknown and invalid keys by name") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        try {
            parse_config_text(text);
            FAIL("expected ConfigError for: " << text);
        } catch (const ConfigError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos,
                          "message was: " << e.what());
        }
    };
    expect_error(R"({"equation": {"preset": "paper-example"}, "grd": {}})", "grd");
    expect_error(R"({"equation": {"preset": "paper-example", "aa": "1"}})", "equation.aa");
    expect_error(R"({"equation": {"preset": "paper-example"}, "grid": {"n_x": -4}})", "n_x");
    expect_error(R"({"equation": {"preset": "paper-example"}, "output": {"format": "xml"}})",
                 "format");
    expect_error(R"({"grid": {}})", "equation");
    expect_error(R"(not json)", "JSON");
    expect_error(R"json({"equation": {"v": "sin(t)"}})json", "equation.v");
}

TEST_CASE("expression-based equation block") {
    const auto cfg = parse_config_text(R"json({
        "equation": {"a": "1 + 0.2*sin(x)", "rho": "0.5", "v": "exp(-x^2/2)",
                     "ellipticity": 0.8},
        "grid": {"mode": "bounded", "n_x": 32}
    })json");
    CHECK(cfg.prop.coeffs.a(0.0, 2.0) == doctest::Approx(1.0 + 0.2 * std::sin(2.0)));
    CHECK_FALSE(cfg.prop.coeffs.a.const_in_x());
    CHECK(cfg.prop.coeffs.rho(0.0, 9.0) == doctest::Approx(0.5));
    CHECK(cfg.prop.coeffs.rho.const_in_x());
    CHECK(cfg.prop.data.v(1.0) == doctest::Approx(std::exp(-0.5)));
    CHECK(cfg.prop.coeffs.ellipticity == doctest::Approx(0.8));
    CHECK(cfg.prop.grid.mode == GridMode::BoundedFiniteDifference);
}

TEST_CASE("output header records the run parameters") {
    const auto cfg = preset_config("paper-example");
    const auto header = output_header(cfg);
    CHECK(header.find("config_hash=") != std::string::npos);
    CHECK(header.find("N=6") != std::string::npos);
    CHECK(header.find("K=16") != std::string::npos);
    CHECK(header.find("mode=periodic") != std::string::npos);
}

TEST_CASE("load_config missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}
