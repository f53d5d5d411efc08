#include <catch2/catch_amalgamated.hpp>
#include <puilift/numerical.hpp>

#include <random>

using namespace puilift;

namespace {

Int cert_sum(const NumericalMonoid& nm, const std::vector<Int>& c) {
    Int s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * nm.gens()[i];
    return s;
}

}  // namespace

TEST_CASE("generator validation") {
    CHECK_THROWS_AS(NumericalMonoid({}), DomainError);
    CHECK_THROWS_AS(NumericalMonoid({Int(0), Int(3)}), DomainError);
    CHECK_THROWS_AS(NumericalMonoid({Int(3), Int(3)}), DomainError);
    CHECK_THROWS_AS(NumericalMonoid({Int(5), Int(3)}), DomainError);
}

TEST_CASE("chicken nugget monoid <6,9,20>") {
    NumericalMonoid nm({Int(6), Int(9), Int(20)});
    CHECK_FALSE(nm.member(Int(43)));  // the Frobenius number
    auto c = nm.member(Int(44));
    REQUIRE(c);
    CHECK(cert_sum(nm, *c) == 44);
    for (Int t = 44; t < 100; ++t) CHECK(nm.member(t).has_value());
    int gaps = 0;
    for (Int t = 1; t <= 43; ++t)
        if (!nm.member(t)) ++gaps;
    CHECK(gaps == 22);  // genus of <6,9,20>
}

TEST_CASE("two generator closed form") {
    NumericalMonoid nm({Int(3), Int(5)});
    CHECK_FALSE(nm.member(Int(7)));
    CHECK_FALSE(nm.member(Int(4)));
    CHECK_FALSE(nm.member(Int(-2)));
    auto c8 = nm.member(Int(8));
    REQUIRE(c8);
    CHECK(*c8 == std::vector<Int>{1, 1});
    // the certificate maximizes the larger generator's multiplicity
    auto c15 = nm.member(Int(15));
    REQUIRE(c15);
    CHECK(*c15 == std::vector<Int>{0, 3});
    auto c6 = nm.member(Int(6));
    REQUIRE(c6);
    CHECK(*c6 == std::vector<Int>{2, 0});
    // huge targets stay exact through the closed form
    const Int big = Int("1000000000000000000000000000000");
    auto cb = nm.member(big);
    REQUIRE(cb);
    CHECK(cert_sum(nm, *cb) == big);

    NumericalMonoid even({Int(4), Int(6)});
    CHECK_FALSE(even.member(Int(5)));
    CHECK_FALSE(even.member(Int(2)));
    CHECK(even.member(Int(10)).has_value());
}

TEST_CASE("single generator and zero") {
    NumericalMonoid nm({Int(7)});
    CHECK(nm.member(Int(0)).has_value());
    CHECK(nm.member(Int(21)).has_value());
    CHECK_FALSE(nm.member(Int(20)));
}

TEST_CASE("apery route agrees with the dp route") {
    std::vector<Int> gens = {Int(6), Int(9), Int(20)};
    NumericalMonoid dp_route(gens);  // default caps: dp handles everything here
    NmCaps tiny;
    tiny.dp_cap = 1;  // force the apery route
    NumericalMonoid apery_route(gens, tiny);
    for (Int t = 0; t <= 200; ++t) {
        auto a = dp_route.member(t);
        auto b = apery_route.member(t);
        CHECK(a.has_value() == b.has_value());
        if (a && b) {
            CHECK(cert_sum(dp_route, *a) == t);
            CHECK(cert_sum(apery_route, *b) == t);
        }
    }
}

TEST_CASE("route agreement on random monoids") {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 50; ++round) {
        std::vector<Int> gens;
        for (int i = 0; i < 4; ++i) {
            Int g = 3 + rng() % 60;
            bool dup = false;
            for (const auto& h : gens) dup = dup || h == g;
            if (!dup) gens.push_back(g);
        }
        std::sort(gens.begin(), gens.end());
        if (gens.size() < 3) continue;
        NumericalMonoid a(gens);
        NmCaps tiny;
        tiny.dp_cap = 1;
        NumericalMonoid b(gens, tiny);
        for (int i = 0; i < 30; ++i) {
            const Int t = rng() % 400;
            auto ra = a.member(t);
            auto rb = b.member(t);
            CHECK(ra.has_value() == rb.has_value());
            if (ra) CHECK(cert_sum(a, *ra) == t);
            if (rb) CHECK(cert_sum(b, *rb) == t);
        }
    }
}

TEST_CASE("certificates prefer the largest generator") {
    NumericalMonoid nm({Int(2), Int(3), Int(7)});
    auto c = nm.member(Int(14));
    REQUIRE(c);
    CHECK(*c == std::vector<Int>{0, 0, 2});
    auto c2 = nm.member(Int(10));
    REQUIRE(c2);
    CHECK(*c2 == std::vector<Int>{0, 1, 1});
}

TEST_CASE("minimal generating set") {
    NumericalMonoid nm({Int(4), Int(6), Int(9), Int(10)});
    CHECK(nm.minimal_generator_indexes() == std::vector<std::size_t>{0, 1, 2});
    NumericalMonoid nm2({Int(3), Int(5), Int(7)});
    CHECK(nm2.minimal_generator_indexes() == std::vector<std::size_t>{0, 1, 2});
    NumericalMonoid nm3({Int(2), Int(4), Int(5)});
    CHECK(nm3.minimal_generator_indexes() == std::vector<std::size_t>{0, 2});
}

TEST_CASE("caps are loud") {
    // three generators, target beyond dp cap, least generator beyond apery cap
    NmCaps tiny;
    tiny.dp_cap = 10;
    tiny.apery_cap = 10;
    NumericalMonoid nm({Int(101), Int(102), Int(103)}, tiny);
    CHECK_THROWS_AS(nm.member(Int(5000)), CapExceeded);
}
