#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "suites.hpp"

using namespace lobexec::testing;

TEST_CASE("randomized property suites") {
    for (const SuiteResult& r : run_all_suites()) {
        CAPTURE(r.name);
        CAPTURE(r.detail);
        CHECK(r.cases >= 500);
        CHECK(r.failures == 0);
    }
}
