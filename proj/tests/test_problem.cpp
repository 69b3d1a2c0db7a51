#include <doctest.h>

#include "common.hpp"
#include "refinery/errors.hpp"

using namespace refinery;
using nlohmann::json;

namespace {

json d4_json() {
    return json::parse(R"({
      "dilation": 2, "digits": [0, 1],
      "mask": [{"point": 0, "coeff": "(1+sqrt(3))/4"}, {"point": 1, "coeff": "(3+sqrt(3))/4"},
               {"point": 2, "coeff": "(3-sqrt(3))/4"}, {"point": 3, "coeff": "(1-sqrt(3))/4"}]
    })");
}

}  // namespace

TEST_CASE("spec round trip is the identity") {
    for (const char* name : {"d4", "ex2", "haar", "quincunx", "d03"}) {
        ProblemSpec a = fixture::spec(name);
        json j = to_json(a);
        ProblemSpec b = parse_problem(j);
        CHECK(to_json(b) == j);
        CHECK(b.options == a.options);
        CHECK(b.mask == a.mask);
        CHECK(b.digits == a.digits);
    }
}

TEST_CASE("one-dimensional shorthand equals the matrix form") {
    json a = d4_json();
    json b = a;
    b["dilation"] = json::array({json::array({2})});
    b["digits"] = json::array({json::array({0}), json::array({1})});
    CHECK(to_json(parse_problem(a)) == to_json(parse_problem(b)));
}

TEST_CASE("unknown fields are rejected") {
    json j = d4_json();
    j["colour"] = "blue";
    CHECK_THROWS_AS(parse_problem(j), SpecError);
    j = d4_json();
    j["mask"][0]["weight"] = 1;
    CHECK_THROWS_AS(parse_problem(j), SpecError);
    j = d4_json();
    j["options"] = {{"resolutoin", 3}};
    CHECK_THROWS_AS(parse_problem(j), SpecError);
}

TEST_CASE("invalid specs are rejected on load") {
    json j = d4_json();
    j["mask"].push_back({{"point", 0}, {"coeff", "1"}});
    CHECK_THROWS_AS(parse_problem(j), SpecError);
    j = d4_json();
    j["digits"] = json::array({0, 2});
    CHECK_THROWS_AS(parse_problem(j), InvalidDigitSet);
    j = d4_json();
    j["dilation"] = 1;
    CHECK_THROWS_AS(parse_problem(j), NotExpansive);
    j = d4_json();
    j["mask"][0]["coeff"] = "(1+";
    CHECK_THROWS_AS(parse_problem(j), SpecError);
    j = d4_json();
    j["mask"][0]["point"] = 0.5;
    CHECK_THROWS_AS(parse_problem(j), SpecError);
    j = d4_json();
    j.erase("digits");
    CHECK_THROWS_AS(parse_problem(j), SpecError);
}

TEST_CASE("malformed JSON file") {
    CHECK_THROWS_AS(load_problem(std::string(REFINERY_TEST_DATA) + "/malformed.json"), SpecError);
    CHECK_THROWS_AS(load_problem(std::string(REFINERY_TEST_DATA) + "/missing.json"), SpecError);
}

TEST_CASE("options override defaults") {
    json j = d4_json();
    j["options"] = {{"resolution", 5}, {"seed", 9}, {"tol", 1e-7}};
    ProblemSpec s = parse_problem(j);
    CHECK(s.options.resolution == 5);
    CHECK(s.options.seed == 9);
    CHECK(s.options.tol == 1e-7);
    CHECK(s.options.n_extra == Options{}.n_extra);
}

TEST_CASE("invariant suite on D4 passes and the non-tile stops at the tile check") {
    std::vector<Check> got;
    run_invariants(fixture::spec("d4"), [&](const Check& c) {
        got.push_back(c);
        return c.passed;
    });
    REQUIRE(!got.empty());
    for (const auto& c : got) CHECK_MESSAGE(c.passed, std::string(c.name + ": " + c.detail));
    got.clear();
    run_invariants(fixture::spec("d03"), [&](const Check& c) {
        got.push_back(c);
        return c.passed;
    });
    REQUIRE(!got.empty());
    CHECK(got.back().name == "tile multiplicity");
    CHECK_FALSE(got.back().passed);
}

TEST_CASE("analysis writers are deterministic") {
    ProblemSpec spec = fixture::spec("ex2");
    TileStats t = tile_check(build_mask(spec), spec.options);
    Analysis a = analyze(spec, t), b = analyze(spec, t);
    CHECK(summary_text(a) == summary_text(b));
    CHECK(jordan_json(a.jordan).dump() == jordan_json(b.jordan).dump());
    CHECK(accuracy_json(a).dump() == accuracy_json(b).dump());
    CHECK(summary_text(a).find("Jordan 2") != std::string::npos);
}
