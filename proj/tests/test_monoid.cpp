#include <catch2/catch_amalgamated.hpp>
#include <puilift/monoid.hpp>

#include <random>

#include "oracles.hpp"

using namespace puilift;

namespace {

Rat q(long n, long d) { return make_rat(Int(n), Int(d)); }

std::vector<std::vector<Int>> as_vectors(const FiniteMonoid::Factorizations& f) {
    std::vector<std::vector<Int>> out;
    for (const auto& c : f.items) {
        std::vector<Int> v(f.atoms.size(), Int(0));
        for (const auto& [i, m] : c) v[i] = m;
        out.push_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("membership basics") {
    std::vector<Rat> gens = {q(1, 2), q(1, 3)};
    auto r = member_finite(gens, q(5, 6));
    REQUIRE(r.member);
    CHECK(verify_certificate(gens, q(5, 6), r.cert));

    auto bad = member_finite(gens, q(1, 5));
    CHECK_FALSE(bad.member);
    CHECK(bad.reason == "denominator-obstruction");

    auto neg = member_finite(gens, q(-1, 2));
    CHECK_FALSE(neg.member);
    CHECK(neg.reason == "negative");

    auto zero = member_finite(gens, Rat(0));
    CHECK(zero.member);
    CHECK(zero.cert.empty());

    auto gap = member_finite(gens, q(1, 6));
    CHECK_FALSE(gap.member);
    CHECK(gap.reason == "exhausted");
}

TEST_CASE("divisibility certificate on a lifted truncation") {
    // generators listed in stream order; certificates index that order
    std::vector<Rat> gens = {q(1, 3), q(1, 10), q(1, 28)};
    auto c = divides(gens, q(1, 2), Rat(1));
    REQUIRE(c);
    CHECK(*c == Cert{{1, Int(5)}});  // 1 - 1/2 = 5 * (1/10)
    CHECK(verify_certificate(gens, q(1, 2), *c));

    CHECK_FALSE(divides(gens, Rat(1), q(1, 2)));  // wrong direction
    CHECK(divides(gens, q(1, 3), q(1, 3))->empty());
}

TEST_CASE("atoms of finite truncations") {
    CHECK(atoms_finite({q(1, 2), q(1, 4)}) == std::vector<Rat>{q(1, 4)});
    CHECK(atoms_finite({Rat(1), q(1, 2), q(1, 4), q(1, 8)}) == std::vector<Rat>{q(1, 8)});
    CHECK(atoms_finite({q(1, 3), q(1, 10), q(1, 28)}) ==
          std::vector<Rat>{q(1, 28), q(1, 10), q(1, 3)});
    CHECK(atoms_finite({q(1, 2), q(1, 3)}) == std::vector<Rat>{q(1, 3), q(1, 2)});
}

TEST_CASE("factorizations are lex ordered over ascending atoms") {
    std::vector<Rat> gens = {q(1, 2), q(1, 3)};
    auto f = factorizations(gens, Rat(2));
    REQUIRE(f.atoms == std::vector<Rat>{q(1, 3), q(1, 2)});
    const auto vecs = as_vectors(f);
    const std::vector<std::vector<Int>> expect = {{Int(0), Int(4)}, {Int(3), Int(2)}, {Int(6), Int(0)}};
    CHECK(vecs == expect);

    auto single = factorizations({q(1, 2), q(1, 4)}, q(1, 2));
    REQUIRE(single.atoms == std::vector<Rat>{q(1, 4)});
    REQUIRE(single.items.size() == 1);
    CHECK(single.items[0] == Cert{{0, Int(2)}});

    auto none = factorizations(gens, q(1, 6));
    CHECK(none.items.empty());

    auto zero = factorizations(gens, Rat(0));
    REQUIRE(zero.items.size() == 1);
    CHECK(zero.items[0].empty());
}

TEST_CASE("common divisors and mcds") {
    std::vector<Rat> gens = {q(1, 2), q(1, 3)};
    std::vector<Rat> xs = {q(5, 6), q(7, 6)};
    const auto cd = common_divisors(gens, xs);
    CHECK(cd == std::vector<Rat>{Rat(0), q(1, 3), q(1, 2), q(5, 6)});
    CHECK(mcds(gens, xs) == std::vector<Rat>{q(5, 6)});

    // certified-entry precondition
    CHECK_THROWS_AS(common_divisors(gens, {q(1, 5)}), DomainError);

    // brute-force cross-check on the same instance
    const auto brute = oracles::brute_common_divisors(gens, xs, cd);
    CHECK(brute == cd);
}

TEST_CASE("membership agrees with brute force on random instances") {
    std::mt19937_64 rng(90210);
    int checked = 0;
    for (int round = 0; round < 60; ++round) {
        std::vector<Rat> gens;
        for (int i = 0; i < 3; ++i) {
            const Rat g = make_rat(Int(1 + rng() % 9), Int(1 + rng() % 9));
            bool dup = false;
            for (const auto& h : gens) dup = dup || h == g;
            if (!dup) gens.push_back(g);
        }
        FiniteMonoid fm(gens);
        for (int i = 0; i < 8; ++i) {
            const Rat x = make_rat(Int(rng() % 60), Int(1 + rng() % 9));
            const auto got = fm.member(x);
            CHECK(got.member == oracles::brute_member(gens, x));
            if (got.member) CHECK(verify_certificate(gens, x, got.cert));
            ++checked;
        }
        CHECK(fm.atoms() == oracles::brute_atoms(gens));
    }
    CHECK(checked >= 200);
}

TEST_CASE("factorizations agree with brute force") {
    std::mt19937_64 rng(5150);
    for (int round = 0; round < 25; ++round) {
        std::vector<Rat> gens;
        for (int i = 0; i < 3; ++i) {
            const Rat g = make_rat(Int(1 + rng() % 7), Int(1 + rng() % 7));
            bool dup = false;
            for (const auto& h : gens) dup = dup || h == g;
            if (!dup) gens.push_back(g);
        }
        FiniteMonoid fm(gens);
        const Rat x = make_rat(Int(rng() % 30), Int(1 + rng() % 7));
        const auto got = as_vectors(fm.factorizations(x));
        const auto want = oracles::brute_factorizations(fm.atoms(), x);
        CHECK(got == want);
    }
}

TEST_CASE("routing agreement between dp, forced search, and apery") {
    std::vector<Rat> gens = {q(1, 6), q(1, 9), q(1, 20)};
    Caps dfs_caps;
    dfs_caps.nm.dp_cap = 0;  // forbid the dp route
    Caps apery_caps;
    apery_caps.nm.dp_cap = 0;
    apery_caps.nm.dfs_node_cap = 0;  // forbid the forced search too
    FiniteMonoid by_dp(gens);
    FiniteMonoid by_dfs(gens, dfs_caps);
    FiniteMonoid by_apery(gens, apery_caps);
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 120; ++i) {
        const Rat x = make_rat(Int(rng() % 200), Int(180));
        const auto a = by_dp.member(x);
        const auto b = by_dfs.member(x);
        const auto c = by_apery.member(x);
        CHECK(a.member == b.member);
        CHECK(a.member == c.member);
        if (a.member) {
            CHECK(verify_certificate(gens, x, a.cert));
            CHECK(verify_certificate(gens, x, b.cert));
            CHECK(verify_certificate(gens, x, c.cert));
        }
    }
}

TEST_CASE("forced search handles coprime denominator towers") {
    // distinct primes per generator force every multiplicity exactly
    std::vector<Rat> gens = {q(1, 257), q(1, 521), q(1, 1031)};
    Caps caps;
    caps.nm.dp_cap = 0;
    FiniteMonoid fm(gens, caps);
    const Rat x = q(1, 257) + q(2, 521) + q(5, 1031);
    auto r = fm.member(x);
    REQUIRE(r.member);
    CHECK(r.cert == Cert{{0, Int(1)}, {1, Int(2)}, {2, Int(5)}});
    CHECK_FALSE(fm.member(x + q(1, 2)).member);
}

TEST_CASE("sparing witness") {
    std::vector<Rat> gens = {q(1, 3), q(1, 10), q(1, 28)};
    const auto bad = sparing_witness(gens, Int(5));
    CHECK_FALSE(bad.spared);
    REQUIRE(bad.violation);
    CHECK(*bad.violation == 1);
    const auto good = sparing_witness(gens, Int(13));
    CHECK(good.spared);
    CHECK(good.checked == 3);
    CHECK_THROWS_AS(sparing_witness(gens, Int(4)), DomainError);
}

TEST_CASE("certificate verification rejects malformed certificates") {
    std::vector<Rat> gens = {q(1, 2), q(1, 3)};
    CHECK(verify_certificate(gens, q(5, 6), Cert{{0, Int(1)}, {1, Int(1)}}));
    CHECK_FALSE(verify_certificate(gens, q(5, 6), Cert{{0, Int(1)}}));
    CHECK_FALSE(verify_certificate(gens, q(5, 6), Cert{{7, Int(1)}}));
    CHECK_FALSE(verify_certificate(gens, q(5, 6), Cert{{0, Int(-1)}}));
}

TEST_CASE("monoid spec finite and stream forms") {
    auto fin = MonoidSpec::finite({q(1, 2), q(1, 3)}, "pair");
    CHECK(fin.is_finite());
    CHECK(fin.finite_size() == 2);
    CHECK(fin.generator(0) == q(1, 3));  // sorted ascending
    CHECK(fin.label() == "pair");
    CHECK_THROWS_AS(MonoidSpec::finite({q(1, 2), q(1, 2)}, "dup"), DomainError);
    CHECK_THROWS_AS(MonoidSpec::finite({Rat(0)}, "zero"), DomainError);

    int calls = 0;
    auto st = MonoidSpec::stream(
        [&calls](std::size_t i) {
            ++calls;
            return make_rat(Int(1), pow2(static_cast<unsigned>(i)));
        },
        "dyadic");
    CHECK_FALSE(st.is_finite());
    CHECK(st.generator(3) == q(1, 8));
    CHECK(st.generator(3) == q(1, 8));
    CHECK(calls == 4);  // memoized
    CHECK(st.truncation(3) == std::vector<Rat>{Rat(1), q(1, 2), q(1, 4)});
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(FiniteMonoid({q(1, 2), q(2, 4)}), DomainError);
    CHECK_THROWS_AS(FiniteMonoid({Rat(0)}), DomainError);
    CHECK_THROWS_AS(FiniteMonoid({q(-1, 2)}), DomainError);
    // a composite denominator built from two primes beyond the trial bound
    const Int p1("1000003"), p2("1000033");
    CHECK_THROWS_AS(FiniteMonoid({Rat(1) / Rat(p1 * p2)}), CapExceeded);
    // ...unless the caller supplies the prime basis
    CHECK_NOTHROW(FiniteMonoid({Rat(1) / Rat(p1 * p2)}, Caps{}, {p1, p2}));
}
