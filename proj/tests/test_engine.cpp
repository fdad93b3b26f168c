#include <doctest.h>

#include <random>
#include <vector>

#include "wk/engine.hpp"

using namespace wk;

namespace {

Rational corr(CorrelatorEngine& e, uint32_t g, std::vector<uint32_t> d) {
    return e.correlator(g, std::move(d));
}

}  // namespace

TEST_CASE("base cases") {
    CorrelatorEngine e;
    CHECK(corr(e, 0, {0, 0, 0}) == 1);
    CHECK(corr(e, 1, {1}) == make_rational(1, 24));
}

TEST_CASE("stability and argument errors") {
    CorrelatorEngine e;
    CHECK_THROWS_AS(corr(e, 0, {0, 0}), domain_error);
    CHECK_THROWS_AS(corr(e, 0, {5}), domain_error);
    CHECK_THROWS_AS(corr(e, 1, {}), domain_error);
    CHECK_THROWS_AS(corr(e, 2, {}), domain_error);
}

TEST_CASE("dimension mismatch gives zero") {
    CorrelatorEngine e;
    CHECK(corr(e, 0, {1, 0, 0}) == 0);
    CHECK(corr(e, 1, {2}) == 0);
    CHECK(corr(e, 2, {1, 1}) == 0);
    CHECK(corr(e, 1, {0, 0}) == 0);
}

TEST_CASE("insertion order does not matter") {
    CorrelatorEngine e;
    CHECK(corr(e, 2, {3, 2}) == corr(e, 2, {2, 3}));
    CHECK(corr(e, 1, {0, 2}) == corr(e, 1, {2, 0}));
}

TEST_CASE("genus zero closed form matches the recursion") {
    CorrelatorEngine closed(true);
    CorrelatorEngine recursive(false);
    std::mt19937 rng(12);
    for (std::size_t n = 3; n <= 8; ++n) {
        for (int trial = 0; trial < 6; ++trial) {
            // random composition of n-3 into n nonnegative parts
            std::vector<uint32_t> d(n, 0);
            std::uniform_int_distribution<std::size_t> slot(0, n - 1);
            for (std::size_t u = 0; u + 3 < n; ++u) ++d[slot(rng)];
            CHECK(corr(closed, 0, d) == corr(recursive, 0, d));
        }
    }
    // multinomial spot checks
    CHECK(corr(closed, 0, {1, 0, 0, 0}) == 1);
    CHECK(corr(closed, 0, {2, 0, 0, 0, 0}) == 1);
    CHECK(corr(closed, 0, {1, 1, 0, 0, 0}) == 2);
    CHECK(corr(closed, 0, {1, 1, 1, 0, 0, 0}) == 6);
    CHECK(corr(closed, 0, {2, 1, 0, 0, 0, 0}) == 3);
}

TEST_CASE("genus one values") {
    CorrelatorEngine e;
    CHECK(corr(e, 1, {0, 2}) == make_rational(1, 24));
    CHECK(corr(e, 1, {1, 1}) == make_rational(1, 24));
    CHECK(corr(e, 1, {0, 0, 3}) == make_rational(1, 24));
    CHECK(corr(e, 1, {1, 0, 2}) == make_rational(1, 12));
    CHECK(corr(e, 1, {1, 1, 1}) == make_rational(1, 12));
}

TEST_CASE("higher genus anchor values") {
    CorrelatorEngine e;
    CHECK(corr(e, 2, {4}) == make_rational(1, 1152));
    CHECK(corr(e, 2, {3, 2}) == make_rational(29, 5760));
    CHECK(corr(e, 2, {2, 2, 2}) == make_rational(7, 240));
    CHECK(corr(e, 2, {5, 0}) == make_rational(1, 1152));
    CHECK(corr(e, 2, {4, 1}) == make_rational(1, 384));
    CHECK(corr(e, 3, {7}) == make_rational(1, 82944));
    // <tau_{3g-2}>_g = 1 / (24^g g!)
    for (uint32_t g = 1; g <= 5; ++g) {
        Rational expect(1);
        for (uint32_t i = 0; i < g; ++i) expect /= 24;
        for (uint32_t i = 2; i <= g; ++i) expect /= i;
        CHECK(corr(e, g, {3 * g - 2}) == expect);
    }
}

TEST_CASE("string relation as a property") {
    CorrelatorEngine e;
    std::mt19937 rng(77);
    std::uniform_int_distribution<uint32_t> gd(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t g = gd(rng);
        std::uniform_int_distribution<std::size_t> nd(g == 0 ? 3 : 1, 6);
        std::size_t n = nd(rng);
        uint64_t dim = 3ull * g + n - 3;
        // spread the dimension over n slots
        std::vector<uint32_t> d(n, 0);
        std::uniform_int_distribution<std::size_t> slot(0, n - 1);
        for (uint64_t u = 0; u < dim; ++u) ++d[slot(rng)];
        Rational lhs = corr(e, g, [&] {
            auto v = d;
            v.push_back(0);
            return v;
        }());
        Rational rhs = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i] == 0) continue;
            auto v = d;
            --v[i];
            rhs += corr(e, g, v);
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("dilaton relation as a property") {
    CorrelatorEngine e;
    std::mt19937 rng(78);
    std::uniform_int_distribution<uint32_t> gd(0, 3);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t g = gd(rng);
        std::uniform_int_distribution<std::size_t> nd(g == 0 ? 3 : 1, 6);
        std::size_t n = nd(rng);
        uint64_t dim = 3ull * g + n - 3;
        std::vector<uint32_t> d(n, 0);
        std::uniform_int_distribution<std::size_t> slot(0, n - 1);
        for (uint64_t u = 0; u < dim; ++u) ++d[slot(rng)];
        Rational lhs = corr(e, g, [&] {
            auto v = d;
            v.push_back(1);
            return v;
        }());
        Rational rhs = Rational(2 * static_cast<long>(g) - 2 + static_cast<long>(n)) * corr(e, g, d);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("cache counters and preloading") {
    CorrelatorEngine e;
    corr(e, 2, {4});
    uint64_t misses = e.cache_misses();
    CHECK(misses > 0);
    CHECK(e.cache_size() > 0);
    corr(e, 2, {4});
    CHECK(e.cache_misses() == misses);
    CHECK(e.cache_hits() > 0);

    // replay through a fresh engine seeded from the snapshot: no misses
    auto snap = e.snapshot();
    CorrelatorEngine warm;
    for (auto& [k, v] : snap) warm.preload(k, v);
    warm.reset_counters();
    CHECK(corr(warm, 2, {4}) == make_rational(1, 1152));
    CHECK(warm.cache_misses() == 0);
    CHECK(warm.cache_hits() == 1);

    // snapshot ordering is canonical and stable
    auto snap2 = e.snapshot();
    REQUIRE(snap.size() == snap2.size());
    for (std::size_t i = 0; i < snap.size(); ++i) {
        CHECK(snap[i].first == snap2[i].first);
        CHECK(snap[i].second == snap2[i].second);
    }
    for (std::size_t i = 1; i < snap.size(); ++i) CHECK(snap[i - 1].first < snap[i].first);
}

TEST_CASE("dimension rejects are not cached") {
    CorrelatorEngine e;
    CHECK(corr(e, 1, {2}) == 0);
    CHECK(e.cache_size() == 0);
    CHECK(e.cache_misses() == 0);
    CHECK(e.cache_hits() == 0);
}
