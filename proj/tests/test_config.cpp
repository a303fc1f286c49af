// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include <doctest.h>

#include "fplab/config.hpp"
#include "fplab/errors.hpp"
#include "fplab/recipes.hpp"

using namespace fplab;

namespace {

const char* kMinimalConfig = R"json({
  "experiment": "minimal",
  "master_seed": 7,
  "trials": 100,
  "ensemble": {
    "geometry": {"kind": "uniform-linear", "elements": 8, "spacing": 0.5},
    "paths": 2,
    "users": 2,
    "aoas": {"kind": "fixed", "values_rad": [0.1, 0.4]},
    "gains": {"kind": "iid-complex-gaussian", "variance": 1.0},
    "coupling": "independent"
  },
  "metrics": [
    {"name": "mean-z", "i": 0, "k": 1}
  ]
})json";

std::string with_replacement(std::string text, const std::string& needle,
                             const std::string& replacement) {
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, needle.size(), replacement);
}

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    CHECK(cfg.experiment == "minimal");
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.trials == 100);
    CHECK(cfg.ensemble.geometry.element_count == 8);
    CHECK(cfg.ensemble.geometry.spacing_h == 0.5);
    CHECK(cfg.ensemble.paths == 2);
    CHECK(cfg.ensemble.users == 2);
    CHECK(cfg.ensemble.aoa_model == AoaModel::FixedList);
    CHECK(cfg.ensemble.fixed_aoas == std::vector<double>{0.1, 0.4});
    CHECK(cfg.ensemble.gain_model == GainModel::IidComplexGaussian);
    CHECK(cfg.ensemble.coupling == Coupling::Independent);
    CHECK(cfg.metrics.size() == 1);
    CHECK(cfg.metrics[0].name == "mean-z");
    CHECK(cfg.eps_values == std::vector<double>{0.5});
    CHECK(cfg.m_values.empty());
    CHECK(cfg.assertions.empty());
    CHECK(cfg.output_dir.empty());
}

TEST_CASE("angles may be given in degrees but not both ways") {
    const std::string deg = with_replacement(
        kMinimalConfig, R"("values_rad": [0.1, 0.4])", R"("values_deg": [30.0, 45.0])");
    const ExperimentConfig cfg = parse_config(deg);
    REQUIRE(cfg.ensemble.fixed_aoas.size() == 2);
    CHECK(cfg.ensemble.fixed_aoas[0] ==
          doctest::Approx(0.5235987755982988).epsilon(1e-15));
    CHECK(cfg.ensemble.fixed_aoas[1] ==
          doctest::Approx(0.7853981633974483).epsilon(1e-15));

    const std::string both = with_replacement(
        kMinimalConfig, R"("values_rad": [0.1, 0.4])",
        R"("values_rad": [0.1, 0.4], "values_deg": [30.0, 45.0])");
    CHECK_THROWS_AS(parse_config(both), config_error);
}

TEST_CASE("missing required fields are reported by name") {
    const std::string no_seed =
        with_replacement(kMinimalConfig, R"("master_seed": 7,)", "");
    try {
        parse_config(no_seed);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("master_seed") != std::string::npos);
        CHECK(msg.find("wall-clock") != std::string::npos);
    }
}

TEST_CASE("multiple problems are reported together") {
    const std::string broken = with_replacement(
        with_replacement(kMinimalConfig, R"("trials": 100)", R"("trials": 1)"),
        R"("paths": 2)", R"("paths": 0)");
    try {
        parse_config(broken);
        FAIL("expected config_error");
    } catch (const config_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("trials") != std::string::npos);
        CHECK(msg.find("paths") != std::string::npos);
    }
}

TEST_CASE("malformed JSON is distinguished from invalid configuration") {
    CHECK_THROWS_WITH_AS(parse_config("{ not json"),
                         doctest::Contains("config is not valid JSON"), config_error);
    CHECK_THROWS_AS(parse_config("[1, 2, 3]"), config_error);
}

TEST_CASE("unknown fields, metric names and checks are rejected") {
    const std::string extra_key =
        with_replacement(kMinimalConfig, R"("master_seed": 7,)",
                         R"("master_seed": 7, "wall_clock": true,)");
    CHECK_THROWS_AS(parse_config(extra_key), config_error);

    const std::string bad_metric =
        with_replacement(kMinimalConfig, R"("name": "mean-z")", R"("name": "meanz")");
    CHECK_THROWS_AS(parse_config(bad_metric), config_error);

    const std::string bad_check = with_replacement(
        kMinimalConfig, R"("metrics": [)",
        R"("assertions": [{"check": "does-not-exist"}], "metrics": [)");
    CHECK_THROWS_AS(parse_config(bad_check), config_error);
}

TEST_CASE("cross-field requirements are enforced") {
    SUBCASE("sweep metrics need element counts") {
        const std::string sweep = with_replacement(
            kMinimalConfig, R"({"name": "mean-z", "i": 0, "k": 1})",
            R"({"name": "sweep", "metric": "mean_z"})");
        CHECK_THROWS_AS(parse_config(sweep), config_error);
    }
    SUBCASE("exact enumeration needs the coupled sign model") {
        const std::string enumerate = with_replacement(
            kMinimalConfig, R"({"name": "mean-z", "i": 0, "k": 1})",
            R"({"name": "enumerate-exact"})");
        CHECK_THROWS_AS(parse_config(enumerate), config_error);
    }
    SUBCASE("assertions must find a matching metric") {
        const std::string orphan = with_replacement(
            kMinimalConfig, R"("metrics": [)",
            R"("assertions": [{"check": "diagonal-unit"}], "metrics": [)");
        CHECK_THROWS_AS(parse_config(orphan), config_error);
    }
    SUBCASE("metric_index must point at a compatible metric") {
        const std::string wrong_index = with_replacement(
            kMinimalConfig, R"("metrics": [)",
            R"("assertions": [{"check": "mean-z-consistent-with-zero", "metric_index": 5}], "metrics": [)");
        CHECK_THROWS_AS(parse_config(wrong_index), config_error);
    }
    SUBCASE("non-increasing element counts are rejected") {
        const std::string bad_ms = with_replacement(
            kMinimalConfig, R"("metrics": [)", R"("m_values": [16, 8], "metrics": [)");
        CHECK_THROWS_AS(parse_config(bad_ms), config_error);
    }
    SUBCASE("correlated users require exactly two users") {
        std::string cfg = with_replacement(kMinimalConfig, R"("users": 2)", R"("users": 3)");
        cfg = with_replacement(cfg, R"("kind": "iid-complex-gaussian", "variance": 1.0)",
                               R"("kind": "correlated-users")");
        CHECK_THROWS_AS(parse_config(cfg), config_error);
    }
}

TEST_CASE("serialization round-trips the parsed configuration") {
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    const std::string canon = serialize_config(cfg);
    const ExperimentConfig back = parse_config(canon);
    CHECK(back == cfg);
    // Canonical text is a fixed point.
    CHECK(serialize_config(back) == canon);
}

TEST_CASE("every shipped recipe part parses and round-trips") {
    for (const Recipe& recipe : recipe_catalog()) {
        for (const RecipePart& part : recipe.parts) {
            CAPTURE(recipe.name);
            CAPTURE(part.label);
            const ExperimentConfig cfg = parse_config(part.config_json);
            const ExperimentConfig back = parse_config(serialize_config(cfg));
            CHECK(back == cfg);
        }
    }
}

TEST_CASE("the recipe catalog is stable and searchable") {
    const auto& catalog = recipe_catalog();
    CHECK(catalog.size() == 6);
    for (const Recipe& r : catalog) {
        CHECK_FALSE(r.name.empty());
        CHECK_FALSE(r.description.empty());
        CHECK_FALSE(r.explanation.empty());
        CHECK_FALSE(r.parts.empty());
        CHECK(find_recipe(r.name) == &r);
    }
    CHECK(find_recipe("no-such-recipe") == nullptr);
}

TEST_CASE("planar and explicit geometries parse from config text") {
    const std::string planar = with_replacement(
        kMinimalConfig, R"({"kind": "uniform-linear", "elements": 8, "spacing": 0.5})",
        R"({"kind": "uniform-planar", "rows": 2, "cols": 4, "spacing": [0.5, 0.7]})");
    const ExperimentConfig p = parse_config(planar);
    CHECK(p.ensemble.geometry.kind == GeometryKind::UniformPlanar);
    CHECK(p.ensemble.geometry.rows == 2);
    CHECK(p.ensemble.geometry.cols == 4);
    CHECK(p.ensemble.geometry.element_count == 8);
    CHECK(p.ensemble.geometry.spacing_h == 0.5);
    CHECK(p.ensemble.geometry.spacing_v == 0.7);

    const std::string expl = with_replacement(
        kMinimalConfig, R"({"kind": "uniform-linear", "elements": 8, "spacing": 0.5})",
        R"({"kind": "explicit-positions", "positions": [[0,0,0],[0.5,0,0]]})");
    const ExperimentConfig x = parse_config(expl);
    CHECK(x.ensemble.geometry.kind == GeometryKind::ExplicitPositions);
    CHECK(x.ensemble.geometry.element_count == 2);
    REQUIRE(x.ensemble.geometry.positions.size() == 2);
    CHECK(x.ensemble.geometry.positions[1][0] == 0.5);
}

TEST_CASE("fixed gain matrices parse from real and imaginary pairs") {
    std::string cfg = with_replacement(
        kMinimalConfig, R"("kind": "iid-complex-gaussian", "variance": 1.0)",
        R"("kind": "fixed-matrix", "entries": [[[1.0, 0.0], [0.0, -1.0]], [[2.0, 0.5], [0.25, 0.0]]])");
    const ExperimentConfig parsed = parse_config(cfg);
    CHECK(parsed.ensemble.gain_model == GainModel::FixedMatrix);
    REQUIRE(parsed.ensemble.fixed_gains.n_rows == 2);
    REQUIRE(parsed.ensemble.fixed_gains.n_cols == 2);
    CHECK(parsed.ensemble.fixed_gains(0, 1) == std::complex<double>(0.0, -1.0));
    CHECK(parsed.ensemble.fixed_gains(1, 0) == std::complex<double>(2.0, 0.5));
}

TEST_CASE("counter-example gains default to the coupled mode") {
    std::string cfg = with_replacement(
        kMinimalConfig, R"("kind": "iid-complex-gaussian", "variance": 1.0)",
        R"("kind": "counterexample")");
    cfg = with_replacement(cfg, R"("coupling": "independent")",
                           R"("coupling": "counterexample-coupled")");
    const ExperimentConfig parsed = parse_config(cfg);
    CHECK(parsed.ensemble.gain_model == GainModel::Counterexample);
    CHECK(parsed.ensemble.coupling == Coupling::CounterexampleCoupled);

    // Omitting the coupling entirely also selects the coupled mode.
    std::string no_coupling = with_replacement(
        kMinimalConfig, R"("kind": "iid-complex-gaussian", "variance": 1.0)",
        R"("kind": "counterexample")");
    no_coupling = with_replacement(no_coupling, R"(,
    "coupling": "independent")", "");
    const ExperimentConfig defaulted = parse_config(no_coupling);
    CHECK(defaulted.ensemble.coupling == Coupling::CounterexampleCoupled);
}

TEST_CASE("correlated-user weights serialize with their resolved defaults") {
    std::string cfg = with_replacement(
        kMinimalConfig, R"("kind": "iid-complex-gaussian", "variance": 1.0)",
        R"("kind": "correlated-users")");
    const ExperimentConfig parsed = parse_config(cfg);
    const std::string canon = serialize_config(parsed);
    CHECK(canon.find("common_weights") != std::string::npos);
    CHECK(canon.find("differential_weights") != std::string::npos);
    const ExperimentConfig back = parse_config(canon);
    CHECK(back == parsed);
}
