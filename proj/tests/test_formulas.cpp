#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "secat/instances.hpp"

using namespace secat;

TEST_CASE("stage map invariants truncate at the stage index") {
    auto bad = props::run_suite(props::min_formula_instance, 100, 201);
    REQUIRE_MESSAGE(!bad, bad.value_or(""));
}
