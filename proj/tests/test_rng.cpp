#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <set>

#include "extdep/rng.hpp"

using extdep::RandomStream;

TEST_CASE("identical keys reproduce the same sequence", "[rng]") {
    RandomStream a(42);
    RandomStream b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams are distinct and position-independent", "[rng]") {
    const RandomStream root(7);
    std::set<std::uint64_t> keys;
    for (std::uint64_t i = 0; i < 1000; ++i) keys.insert(root.substream(i).key());
    REQUIRE(keys.size() == 1000);

    // Consuming draws from the parent must not move the children.
    RandomStream parent(7);
    const std::uint64_t before = parent.substream(3).key();
    parent.next_u64();
    parent.next_u64();
    REQUIRE(parent.substream(3).key() == before);
}

TEST_CASE("unit draws live in [0, 1)", "[rng]") {
    RandomStream s(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("bounded draws are in range and roughly uniform", "[rng]") {
    RandomStream s(5);
    std::array<int, 10> buckets{};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t v = s.next_below(10);
        REQUIRE(v < 10);
        ++buckets[static_cast<std::size_t>(v)];
    }
    for (const int count : buckets) {
        REQUIRE(count > draws / 10 - 600);   // ~5 sigma
        REQUIRE(count < draws / 10 + 600);
    }
}

TEST_CASE("fnv1a64 matches reference vectors", "[rng]") {
    REQUIRE(extdep::fnv1a64("") == 0xcbf29ce484222325ULL);
    REQUIRE(extdep::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    REQUIRE(extdep::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
