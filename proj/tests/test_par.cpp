#include <doctest.h>

#include <random>

#include "pclass/errors.hpp"
#include "pclass/par.hpp"

using namespace pclass;

TEST_CASE("find_first returns the minimal match, parallel == serial") {
    std::mt19937_64 eng(11);
    for (int it = 0; it < 50; ++it) {
        std::size_t n = 200 + eng() % 2000;
        std::vector<char> hits(n, 0);
        for (std::size_t i = 0; i < n; ++i) hits[i] = (eng() % 17) == 0;
        auto pred = [&](std::size_t i) { return hits[i] != 0; };
        auto a = par::find_first(n, pred);
        auto b = par::find_first_serial(n, pred);
        CHECK(a == b);
    }
}

TEST_CASE("find_first: no match") {
    CHECK(!par::find_first(1000, [](std::size_t) { return false; }));
    CHECK(!par::find_first(0, [](std::size_t) { return true; }));
}

TEST_CASE("for_each_index fills every slot, parallel == serial") {
    std::size_t n = 3000;
    std::vector<std::size_t> a(n, 0), b(n, 0);
    par::for_each_index(n, [&](std::size_t i) { a[i] = i * i + 1; });
    par::for_each_index_serial(n, [&](std::size_t i) { b[i] = i * i + 1; });
    CHECK(a == b);
}

TEST_CASE("exceptions propagate out of parallel regions") {
    CHECK_THROWS_AS(par::for_each_index(500, [&](std::size_t i) {
        if (i == 123) fail(errc::precision_exhausted, "sample");
    }),
                    error);
    CHECK_THROWS_AS((void)par::find_first(500, [&](std::size_t i) -> bool {
        if (i == 321) fail(errc::backend_failure, "sample");
        return false;
    }),
                    error);
}

TEST_CASE("force_serial toggles the execution mode") {
    par::force_serial(true);
    CHECK(!par::parallel_enabled());
    auto r = par::find_first(100, [](std::size_t i) { return i == 42; });
    CHECK(r == std::optional<std::size_t>(42));
    par::force_serial(false);
    CHECK(par::parallel_enabled());
}
