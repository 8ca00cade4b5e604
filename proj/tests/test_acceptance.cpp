#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <vector>

#include "parafree/acceptance.hpp"

using namespace parafree;

namespace {

// The suite solves several evolution problems, so it runs once and every
// test case reads its own line from the shared result.
const std::vector<CriterionResult>& results() {
    static const std::vector<CriterionResult> all = run_acceptance(AcceptanceOptions{});
    return all;
}

void check_criterion(int index) {
    const CriterionResult& r = results().at(static_cast<std::size_t>(index - 1));
    std::printf("%s\n", format_criterion(r).c_str());
    REQUIRE(r.index == index);
    INFO(r.detail);
    CHECK(r.pass);
}

}  // namespace

TEST_CASE("extremal operators match the brute-force net oracle") { check_criterion(1); }

TEST_CASE("half-space coefficients hit their closed forms and range") { check_criterion(2); }

TEST_CASE("the stationary half-space profile survives the evolution") { check_criterion(3); }

TEST_CASE("the nonconvex fixture verifies yet never decays") { check_criterion(4); }

TEST_CASE("boundary maxima beat the quadratic growth rate") { check_criterion(5); }

TEST_CASE("the approximation ladder tracks jets and stays bounded") { check_criterion(6); }

TEST_CASE("complement thickness is exact on profiles and scales") { check_criterion(7); }

TEST_CASE("directional monotonicity propagates inward") { check_criterion(8); }

TEST_CASE("blow-up fits recover the profile at solved interfaces") { check_criterion(9); }

TEST_CASE("complement density obeys the half-scale identity") { check_criterion(10); }

TEST_CASE("coarsening by more than two is rejected") {
    AcceptanceOptions opts;
    opts.h_scale = 4;
    CHECK_THROWS_AS(run_acceptance(opts), std::invalid_argument);
}
