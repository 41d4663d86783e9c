#include <doctest.h>

#include "leflab/harness.hpp"

using namespace leflab;
using namespace leflab::harness;

TEST_CASE("builtin scenarios cover the parameter matrix") {
    auto all = builtin_scenarios();
    CHECK(all.size() >= 8);
    bool c_small = false, c_big = false, has_swap = false, has_noswap = false;
    for (const auto& s : all) {
        if (s.c < 1) c_small = true;
        if (s.c > 1) c_big = true;
        if (s.boundary_map.rfind("swap", 0) == 0) has_swap = true;
        else has_noswap = true;
    }
    CHECK(c_small);
    CHECK(c_big);
    CHECK(has_swap);
    CHECK(has_noswap);
    CHECK_NOTHROW(builtin_scenario("disk-reflection"));
    CHECK_NOTHROW(builtin_scenario("annulus-swap"));
    CHECK_THROWS(builtin_scenario("moebius-mystery"));
}

TEST_CASE("disk reflection scenario: every identity exact") {
    IdentityReport rep = verify_identities(builtin_scenario("disk-reflection"));
    REQUIRE(rep.error.empty());
    CHECK(rep.pass);
    CHECK(rep.k0 == doctest::Approx(1.0));
    CHECK(rep.orientation_reversing);
    REQUIRE(rep.fixed_points.size() == 5);

    auto find = [&](const std::string& name) -> const IdentityEntry& {
        for (const auto& e : rep.identities)
            if (e.name == name) return e;
        throw std::runtime_error("identity missing: " + name);
    };
    CHECK(find("mixed-p0-identity").lhs_exact == "-1");
    CHECK(find("mixed-p0-identity").rhs_exact == "-1");
    CHECK(find("mixed-p0-identity").residual == 0.0);
    CHECK(find("mixed-p1-identity").lhs_exact == "1");
    CHECK(find("absolute-vs-fixed-points").lhs_exact == "1");
    CHECK(find("relative-vs-fixed-points").lhs_exact == "-1");
    CHECK(find("cross-k0-antisymmetry").residual == 0.0);
    CHECK(find("cross-sum-consistency").residual == 0.0);
}

TEST_CASE("annulus swap scenario: L_P0 = -2, L_P1 = +2, K0 = 2, no fixed points") {
    IdentityReport rep = verify_identities(builtin_scenario("annulus-swap"));
    REQUIRE(rep.error.empty());
    CHECK(rep.pass);
    CHECK(rep.k0 == doctest::Approx(2.0));
    CHECK(rep.fixed_points.empty());
    for (const auto& e : rep.identities) {
        if (e.name == "mixed-p0-identity") {
            CHECK(e.lhs_exact == "-2");
            CHECK(e.residual == 0.0);
        }
        if (e.name == "mixed-p1-identity") CHECK(e.lhs_exact == "2");
    }
}

TEST_CASE("run_suite aggregates and stays deterministic") {
    std::vector<Scenario> scenarios = {builtin_scenario("interval-identity"),
                                       builtin_scenario("interval-swap")};
    SuiteResult r1 = run_suite(scenarios, 2);
    SuiteResult r2 = run_suite(scenarios, 1);
    CHECK(r1.all_pass);
    CHECK(r2.all_pass);
    REQUIRE(r1.reports.size() == 2);
    // identical apart from the isolated timing field
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(r1.reports[i].scenario.name == scenarios[i].name);
        REQUIRE(r1.reports[i].identities.size() == r2.reports[i].identities.size());
        for (std::size_t k = 0; k < r1.reports[i].identities.size(); ++k) {
            CHECK(r1.reports[i].identities[k].lhs == r2.reports[i].identities[k].lhs);
            CHECK(r1.reports[i].identities[k].rhs == r2.reports[i].identities[k].rhs);
        }
        CHECK(suite_to_csv(r1) == suite_to_csv(r2));
    }
}

TEST_CASE("empty scenario list is a success") {
    SuiteResult r = run_suite({}, 1);
    CHECK(r.all_pass);
    CHECK(r.reports.empty());
}

TEST_CASE("reports serialize to valid JSON and CSV") {
    SuiteResult r = run_suite({builtin_scenario("interval-identity")}, 1);
    std::string json = suite_to_json(r);
    std::string why;
    CHECK(validate_report_json(json, &why));
    if (!why.empty()) MESSAGE(why);
    std::string single = report_to_json(r.reports[0]);
    CHECK(validate_report_json(single, &why));
    std::string csv = suite_to_csv(r);
    CHECK(csv.find("scenario,identity,lhs,rhs,residual,verdict,routes") == 0);
    CHECK(csv.find("interval-identity,absolute-vs-fixed-points") != std::string::npos);

    CHECK_FALSE(validate_report_json("{\"oops\": 1}", &why));
    CHECK_FALSE(validate_report_json("not json", &why));
}
