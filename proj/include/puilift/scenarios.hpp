#pragma once

// Named verification scenarios over the worked constructions. Each run
// produces a Report whose canonical JSON is byte-identical for identical
// configuration; the seed steers the randomized sampling only, never a
// construction. Inconclusive rows are listed but never fail a run.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "counterexample.hpp"
#include "exact.hpp"
#include "lifting.hpp"
#include "monoid.hpp"
#include "report.hpp"

namespace puilift {

struct Scenario {
    std::string name;  // grams | antimatter | strongly-atomic | main-theorem | furstenberg
    long depth = 8;
    FieldSpec field = FieldSpec::rationals();
    ParamOverrides overrides;
    unsigned long long seed = 20250817;
};

inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"grams", "antimatter", "strongly-atomic",
                                                   "main-theorem", "furstenberg"};
    return names;
}

inline void validate_scenario(const Scenario& sc) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), sc.name) == names.end())
        throw DomainError("unknown scenario: " + sc.name);
    if (sc.depth < 2) throw DomainError("scenario depth must be at least 2");
}

// ---------------------------------------------------------------------------
// fixture: the halving base with the n-th odd prime and N = N0

inline Int grams_prime(std::size_t i) {
    Int p = 2;
    for (std::size_t k = 0; k <= i; ++k) p = next_prime(p);
    return p;
}

inline MonoidSpec grams_base_spec() {
    return MonoidSpec::stream([](std::size_t i) { return Rat(1, pow2(static_cast<long>(i))); },
                              "halving");
}

inline LiftingFunction grams_lifting() {
    return LiftingFunction(grams_base_spec(), [](std::size_t i) {
        return std::optional<LiftAssignment>(LiftAssignment{grams_prime(i), {Int(1)}});
    });
}

inline Hooks grams_hooks() {
    Hooks h;
    h.base_member = [](const Rat& x) -> BaseAnswer {
        if (x < 0) return {Verdict::NonMember, {}, "negative"};
        if (x == 0) return {Verdict::Member, {}, ""};
        if (!is_power_of_two(den(x))) return {Verdict::NonMember, {}, "denominator"};
        Cert c;
        c[static_cast<std::size_t>(multiplicity(den(x), Int(2)))] = num(x);
        return {Verdict::Member, c, ""};
    };
    h.valuation_bound = [](const Int& p) -> std::optional<long> {
        if (p == 2) return std::nullopt;  // the base is 2-divisible
        return -1;
    };
    h.base_atom = [](const Rat&) { return Verdict::NonMember; };  // halves split everything
    h.source_prime = [](const Int& p) {
        // every odd prime appears in the assignment stream
        return p == 2 ? Verdict::NonMember : Verdict::Member;
    };
    return h;
}

inline LiftedMonoid build_grams(std::size_t validation_depth) {
    return LiftedMonoid(grams_lifting(), validation_depth, grams_hooks());
}

// ---------------------------------------------------------------------------
// fixture: all positive dyadics with N = <p_n, p_{n+1}>

/// Level t >= 1 lists (2i-1)/2^k for k = t-1 down to 1 and then the integer
/// t at k = 0; every positive dyadic appears exactly once.
inline Rat dyadic_enumeration(std::size_t n) {
    std::size_t t = 1, base = 0;
    while (base + t <= n) base += t++;
    const std::size_t k = t - 1 - (n - base);
    const std::size_t i = t - k;
    if (k == 0) return Rat(static_cast<long>(i));
    return Rat(Int(2 * static_cast<long>(i) - 1), pow2(static_cast<long>(k)));
}

/// Position of a positive dyadic (lowest terms) in the enumeration.
inline std::size_t dyadic_enum_index(const Rat& x) {
    const long k = static_cast<long>(multiplicity(den(x), Int(2)));
    const Int i = (k == 0) ? num(x) : (num(x) + 1) / 2;
    const std::size_t t = static_cast<std::size_t>(i.convert_to<long>() + k);
    return t * (t - 1) / 2 + (t - 1 - static_cast<std::size_t>(k));
}

/// Greedy odd primes for the dyadic enumeration: strictly increasing,
/// v_{p_n}(s_n) = 0, and p_{n+1} s_n > p_n. Copies share the table.
class AntimatterPrimes {
public:
    Int prime(std::size_t n) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        while (st_->primes.size() <= n) {
            const std::size_t i = st_->primes.size();
            const Rat s = dyadic_enumeration(i);
            Int start(2);
            if (i > 0) {
                start = st_->primes.back();
                const Int fl = floor_rat(Rat(start) / dyadic_enumeration(i - 1));
                if (fl > start) start = fl;
            }
            st_->primes.push_back(next_prime_satisfying(
                start, [&s](const Int& p) { return num(s) % p != 0; }));
        }
        return st_->primes[n];
    }

    bool contains(const Int& p) const {
        if (p < 3) return false;
        for (std::size_t n = 0;; ++n) {
            const Int q = prime(n);
            if (q == p) return true;
            if (q > p) return false;
        }
    }

private:
    struct State {
        mutable std::mutex mu;
        std::vector<Int> primes;
    };
    std::shared_ptr<State> st_ = std::make_shared<State>();
};

inline LiftingFunction antimatter_lifting(const AntimatterPrimes& seq) {
    return LiftingFunction(
        MonoidSpec::stream([](std::size_t i) { return dyadic_enumeration(i); }, "dyadics"),
        [seq](std::size_t i) {
            return std::optional<LiftAssignment>(
                LiftAssignment{seq.prime(i), {seq.prime(i), seq.prime(i + 1)}});
        });
}

inline Hooks antimatter_hooks(const AntimatterPrimes& seq) {
    Hooks h;
    h.base_member = [](const Rat& x) -> BaseAnswer {
        if (x < 0) return {Verdict::NonMember, {}, "negative"};
        if (x == 0) return {Verdict::Member, {}, ""};
        if (!is_power_of_two(den(x))) return {Verdict::NonMember, {}, "denominator"};
        Cert c;
        c[dyadic_enum_index(x)] = 1;  // every positive dyadic is itself a generator
        return {Verdict::Member, c, ""};
    };
    h.valuation_bound = [seq](const Int& p) -> std::optional<long> {
        if (p == 2) return std::nullopt;
        return seq.contains(p) ? -1 : 0;
    };
    h.base_atom = [](const Rat&) { return Verdict::NonMember; };  // antimatter base
    h.source_prime = [seq](const Int& p) -> Verdict {
        if (p == 2) return Verdict::NonMember;
        return seq.contains(p) ? Verdict::Member : Verdict::NonMember;
    };
    return h;
}

inline LiftedMonoid build_antimatter(const AntimatterPrimes& seq, std::size_t validation_depth) {
    return LiftedMonoid(antimatter_lifting(seq), validation_depth, antimatter_hooks(seq));
}

// ---------------------------------------------------------------------------
// fixture: the main base with the plain N0 lifting

/// Greedy strictly increasing primes over the main base stream, avoiding
/// every construction denominator so the sparing condition holds globally,
/// with v_{pi(s)}(s) = 0. Copies share the table.
class SparingPrimes {
public:
    explicit SparingPrimes(const CounterexampleParams& P) : P_(P), base_(main_base_spec(P)) {}

    Int prime(std::size_t n) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        while (st_->primes.size() <= n) {
            const std::size_t i = st_->primes.size();
            const Rat s = base_.generator(i);
            const Int start = i == 0 ? Int(2) : st_->primes.back();
            st_->primes.push_back(next_prime_satisfying(start, [&](const Int& p) {
                return p != P_.b1_prime() && p != P_.c1_prime() && !P_.q_index(p) &&
                       num(s) % p != 0 && den(s) % p != 0;
            }));
        }
        return st_->primes[n];
    }

    bool contains(const Int& p) const {
        if (p < 3) return false;
        for (std::size_t n = 0;; ++n) {
            const Int q = prime(n);
            if (q == p) return true;
            if (q > p) return false;
        }
    }

private:
    CounterexampleParams P_;
    MonoidSpec base_;
    struct State {
        mutable std::mutex mu;
        std::vector<Int> primes;
    };
    std::shared_ptr<State> st_ = std::make_shared<State>();
};

inline LiftingFunction strongly_atomic_lifting(const CounterexampleParams& P,
                                               const SparingPrimes& seq) {
    return LiftingFunction(main_base_spec(P), [seq](std::size_t i) {
        return std::optional<LiftAssignment>(LiftAssignment{seq.prime(i), {Int(1)}});
    });
}

inline Hooks strongly_atomic_hooks(const CounterexampleParams& P, const SparingPrimes& seq) {
    Hooks h;
    h.base_member = [P](const Rat& x) { return main_base_member(P, x); };
    h.valuation_bound = [P, seq](const Int& p) -> std::optional<long> {
        if (p == P.b1_prime() || p == P.c1_prime() || P.q_index(p)) return -1;
        if (seq.contains(p)) return -1;
        return 0;
    };
    h.base_atom = [P](const Rat& x) -> Verdict {
        // atoms of the base are exactly the a_k
        if (x <= 0 || x >= 1) return Verdict::NonMember;
        return (num(x) == 1 && P.q_index(den(x))) ? Verdict::Member : Verdict::NonMember;
    };
    h.source_prime = [P, seq](const Int& p) -> Verdict {
        if (p == P.b1_prime() || p == P.c1_prime() || P.q_index(p)) return Verdict::NonMember;
        return seq.contains(p) ? Verdict::Member : Verdict::NonMember;
    };
    return h;
}

inline LiftedMonoid build_strongly_atomic(const CounterexampleParams& P, const SparingPrimes& seq,
                                          std::size_t validation_depth) {
    return LiftedMonoid(strongly_atomic_lifting(P, seq), validation_depth,
                        strongly_atomic_hooks(P, seq));
}

// ---------------------------------------------------------------------------
// runners

namespace detail {

using report::json;

/// mt19937_64 is fully specified by the standard; modulo draws keep the
/// sampling identical across platforms (the slight bias is irrelevant).
class Sampler {
public:
    explicit Sampler(unsigned long long seed) : eng_(seed) {}

    unsigned long long below(unsigned long long n) { return eng_() % n; }

    Rat coefficient(const FieldSpec& field) {
        if (field.is_prime_field()) {
            const Int p = field.modulus();
            const unsigned long long lim =
                p > 997 ? 997 : p.convert_to<unsigned long long>() - 1;
            return Rat(Int(1 + below(lim)));
        }
        const long n = 1 + static_cast<long>(below(9));
        const long d = 1 + static_cast<long>(below(4));
        return Rat(below(2) ? n : -n, d);
    }

private:
    std::mt19937_64 eng_;
};

inline json rat_list_json(const std::vector<Rat>& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(report::rat_json(x));
    return a;
}

inline std::string two_digit_id(const char* prefix, long n) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s-%02ld", prefix, n);
    return buf;
}

inline bool decomp_equal(const CanonicalDecomposition& a, const CanonicalDecomposition& b) {
    return a.value == b.value && a.x0 == b.x0 && a.parts == b.parts && a.part_n == b.part_n;
}

inline Cert draw_cert(Sampler& rng, std::size_t gen_count, std::size_t support_hi,
                      unsigned long long mult_hi) {
    Cert c;
    const std::size_t k = 1 + rng.below(support_hi);
    for (std::size_t t = 0; t < k; ++t) c[rng.below(gen_count)] += Int(1 + rng.below(mult_hi));
    return c;
}

/// Canonical decomposition is certificate independent: random certificates
/// decompose identically to the decoder (small draws), and value-preserving
/// certificate rewrites land on the same decomposition (free-form draws).
inline report::Check uniqueness_check(LiftedMonoid& lifted, Sampler& rng, std::size_t gen_count,
                                      std::size_t decode_support, unsigned long long decode_mult,
                                      std::size_t decode_depth, long n_decode, long n_rewrite,
                                      const std::function<std::pair<Cert, Cert>(Sampler&)>& rewrite) {
    long bad = 0;
    json entries = json::array();
    for (long t = 0; t < n_decode; ++t) {
        const Cert c = draw_cert(rng, gen_count, decode_support, decode_mult);
        const auto direct = lifted.canonical_decomposition(c);
        const auto dec = lifted.decode(direct.value, decode_depth);
        const bool ok = dec.status == DecodeResult::Status::Decomposed &&
                        decomp_equal(direct, *dec.decomposition);
        bad += ok ? 0 : 1;
        entries.push_back(json{{"kind", "decode"},
                               {"ok", ok},
                               {"value", report::rat_json(direct.value)}});
    }
    for (long t = 0; t < n_rewrite; ++t) {
        const auto [c1, c2] = rewrite(rng);
        const auto d1 = lifted.canonical_decomposition(c1);
        const auto d2 = lifted.canonical_decomposition(c2);
        const bool ok = decomp_equal(d1, d2);
        bad += ok ? 0 : 1;
        entries.push_back(
            json{{"kind", "rewrite"}, {"ok", ok}, {"value", report::rat_json(d1.value)}});
    }
    return {"unique-decomposition", "canonical-decomposition-unique",
            bad == 0 ? "pass" : "fail",
            std::to_string(n_decode + n_rewrite) + " samples, " + std::to_string(bad) +
                " mismatches",
            json{{"entries", entries}, {"samples", n_decode + n_rewrite}}};
}

inline report::Check lifting_valid_check(const LiftingFunction& phi, std::size_t depth) {
    const auto v = validate_lifting_function(phi, depth);
    json issues = json::array();
    for (const auto& is : v.issues) issues.push_back(is.condition);
    return {"lifting-valid", "lifting-function-conditions", v.issues.empty() ? "pass" : "fail",
            "conditions checked at depth " + std::to_string(depth),
            json{{"depth", static_cast<long>(depth)}, {"issues", issues}}};
}

// ---- grams ----------------------------------------------------------------

inline void run_grams(const Scenario& sc, report::Report& rep) {
    const auto d = static_cast<std::size_t>(sc.depth);
    auto lifted = build_grams(d);

    rep.add(lifting_valid_check(grams_lifting(), d));

    {  // the truncation's atoms are exactly its generators
        const auto gens = lifted.truncation(d);
        const auto atoms = atoms_finite(gens);
        auto ascending = gens;
        std::sort(ascending.begin(), ascending.end());  // atoms come back ascending
        const bool ok = atoms == ascending;
        rep.add({"atoms-complete", "atoms-of-lifted-truncation", ok ? "pass" : "fail",
                 std::to_string(atoms.size()) + " atoms at depth " + std::to_string(d),
                 json{{"atoms", rat_list_json(atoms)}, {"generators", rat_list_json(gens)}}});
    }

    {  // the principal ideals (1/2^n + M) ascend strictly, never stabilizing
        std::vector<Rat> chain;
        for (std::size_t n = 1; n <= d; ++n) chain.push_back(Rat(1, pow2(static_cast<long>(n))));
        const auto probe = lifted.accp_chain_probe(Rat(1), chain, d + 6);
        const bool ok = probe.status == "ok" && probe.steps_certified == d;
        json steps = json::array();
        for (const auto& st : probe.steps)
            steps.push_back(json{{"diff", report::rat_json(st.diff)},
                                 {"from", report::rat_json(st.from)},
                                 {"to", report::rat_json(st.to)}});
        rep.add({"accp-ascent", "ascending-principal-ideal-chain", ok ? "pass" : "fail",
                 std::to_string(probe.steps_certified) + " steps certified",
                 json{{"start", report::rat_json(Rat(1))}, {"steps", steps}}});
    }

    Sampler rng(sc.seed);
    auto rewrite = [&lifted, d](Sampler& r) {
        // p_n copies of the n-th generator equal 2 p_{n+1} copies of the next
        Cert c1 = draw_cert(r, d, 3, 3);
        const std::size_t n = r.below(d - 1);
        c1[n] += grams_prime(n);
        Cert c2 = c1;
        c2[n] -= grams_prime(n);
        if (c2[n] == 0) c2.erase(n);
        c2[n + 1] += 2 * grams_prime(n + 1);
        (void)lifted;
        return std::make_pair(c1, c2);
    };
    rep.add(uniqueness_check(lifted, rng, d, 3, 6, d + 6, 20, 20, rewrite));
}

// ---- antimatter -----------------------------------------------------------

inline void run_antimatter(const Scenario& sc, report::Report& rep) {
    const auto d = static_cast<std::size_t>(sc.depth);
    AntimatterPrimes seq;
    auto lifted = build_antimatter(seq, d);

    rep.add(lifting_valid_check(antimatter_lifting(seq), d));

    {  // every base element splits in half; none stays an atom upstairs
        json rows = json::array();
        bool ok = true;
        for (std::size_t n = 0; n < d; ++n) {
            const Rat s = dyadic_enumeration(n);
            const Rat half = s / 2;
            const std::size_t depth = dyadic_enum_index(half) + 4;
            const auto cls = lifted.classify_atom(s, depth);
            const bool row_ok = cls.kind == AtomClassification::Kind::NotAtom &&
                                is_power_of_two(den(half));
            ok = ok && row_ok;
            json split = json::array();
            for (const auto& w : cls.witness) split.push_back(report::rat_json(w));
            rows.push_back(json{{"element", report::rat_json(s)},
                                {"half", report::rat_json(half)},
                                {"ok", row_ok},
                                {"split", split}});
        }
        rep.add({"no-base-atoms", "antimatter-base-split", ok ? "pass" : "fail",
                 "first " + std::to_string(d) + " dyadics split", json{{"rows", rows}}});
    }

    {  // the second piece generator of each source is a fresh atom
        json rows = json::array();
        bool ok = true;
        const std::size_t m = std::min<std::size_t>(d, 8);
        for (std::size_t n = 0; n < m; ++n) {
            const Rat x = Rat(seq.prime(n + 1), seq.prime(n)) * dyadic_enumeration(n);
            const auto cls = lifted.classify_atom(x, d + 8);
            const bool row_ok = cls.kind == AtomClassification::Kind::AtomOfMs;
            ok = ok && row_ok;
            rows.push_back(json{{"atom", report::rat_json(x)},
                                {"ok", row_ok},
                                {"source", report::rat_json(dyadic_enumeration(n))}});
        }
        rep.add({"piece-atoms", "piece-atom-lifts", ok ? "pass" : "fail",
                 std::to_string(m) + " piece atoms classified", json{{"rows", rows}}});
    }

    Sampler rng(sc.seed);
    const std::size_t gen_count = d + 4;
    auto rewrite = [&lifted, &seq, d](Sampler& r) {
        // p_{n+1} copies of the first piece equal p_n copies of the second
        Cert c1 = draw_cert(r, d, 3, 3);
        const std::size_t n = r.below(std::min<std::size_t>(d, 6));
        const std::size_t first = lifted.stream_index(n, 0);
        const std::size_t second = lifted.stream_index(n, 1);
        c1[first] += seq.prime(n + 1);
        Cert c2 = c1;
        c2[first] -= seq.prime(n + 1);
        if (c2[first] == 0) c2.erase(first);
        c2[second] += seq.prime(n);
        return std::make_pair(c1, c2);
    };
    rep.add(uniqueness_check(lifted, rng, gen_count, 3, 4, d + 8, 20, 20, rewrite));
}

// ---- strongly-atomic -------------------------------------------------------

inline void run_strongly_atomic(const Scenario& sc, report::Report& rep) {
    const auto d = static_cast<std::size_t>(sc.depth);
    const CounterexampleParams P = build_params(sc.overrides);
    SparingPrimes seq(P);
    auto lifted = build_strongly_atomic(P, seq, d);

    rep.add(lifting_valid_check(strongly_atomic_lifting(P, seq), d));

    {  // s/pi(s) is the least element of M_s and stays an atom upstairs
        json rows = json::array();
        bool ok = true;
        for (std::size_t i = 0; i < d; ++i) {
            const Rat s = lifted.base_generator(i);
            const Rat g = s / Rat(seq.prime(i));
            const auto cls = lifted.classify_atom(g, d + 6);
            const bool row_ok = cls.kind == AtomClassification::Kind::AtomOfMs;
            ok = ok && row_ok;
            rows.push_back(json{{"atom", report::rat_json(g)},
                                {"ok", row_ok},
                                {"pi", report::int_json(seq.prime(i))},
                                {"source", report::rat_json(s)}});
        }
        rep.add({"piece-atoms", "piece-minimum-is-atom", ok ? "pass" : "fail",
                 std::to_string(d) + " piece atoms certified", json{{"rows", rows}}});
    }

    {  // each base generator is pi(s) copies of its piece atom, so atomic
        json rows = json::array();
        bool ok = true;
        for (std::size_t i = 0; i < d; ++i) {
            const Rat s = lifted.base_generator(i);
            Cert c;
            c[lifted.stream_index(i, 0)] = seq.prime(i);
            const auto dec = lifted.canonical_decomposition(c);
            const bool row_ok = dec.value == s && dec.parts.empty() && dec.x0 == s;
            ok = ok && row_ok;
            rows.push_back(json{{"copies", report::int_json(seq.prime(i))},
                                {"ok", row_ok},
                                {"source", report::rat_json(s)}});
        }
        rep.add({"base-atomic", "base-element-factors-into-atoms", ok ? "pass" : "fail",
                 std::to_string(d) + " base generators decomposed", json{{"rows", rows}}});
    }

    {  // strictly ascending certified common divisors of {b1, c1}: every
       // common divisor admits a strictly larger one
        const long steps = std::min<long>(std::max<long>(sc.depth, 10), 25);
        const auto chain = improvement_chain(P, steps);
        bool ok = true;
        json rows = json::array();
        Rat prev(0);
        for (const auto& r : chain) {
            const bool row_ok = r.divisor > prev && r.increment == P.a(r.a_index) &&
                                m_cert_value(P, r.cert_b) == P.b1() - r.divisor &&
                                m_cert_value(P, r.cert_c) == P.c1() - r.divisor;
            ok = ok && row_ok;
            prev = r.divisor;
            rows.push_back(json{{"a_index", r.a_index},
                                {"divisor", report::rat_json(r.divisor)},
                                {"increment", report::rat_json(r.increment)},
                                {"ok", row_ok}});
        }
        rep.add({"mcd-improvement", "no-maximal-common-divisor", ok ? "pass" : "fail",
                 std::to_string(steps) + " strict improvements certified",
                 json{{"rows", rows}}});
    }

    {  // transfer evidence on a small truncation: lifted common divisors
       // project onto base common divisors and the maximal ones agree
        try {
            const auto k = lifted.kmcd_transfer_check({P.b1(), P.c1()}, 3);
            const bool ok = k.status == "ok" && k.projections_are_base_cds &&
                            k.mcd_projections_agree;
            rep.add({"kmcd-transfer", "k-mcd-transfer", ok ? "pass" : "fail",
                     "truncation depth 3",
                     json{{"cd_base", rat_list_json(k.cd_base)},
                          {"cd_lifted", rat_list_json(k.cd_lifted)},
                          {"mcd_base", rat_list_json(k.mcd_base)},
                          {"mcd_lifted", rat_list_json(k.mcd_lifted)}}});
        } catch (const CapExceeded& e) {
            rep.add({"kmcd-transfer", "k-mcd-transfer", "inconclusive", e.what(), json()});
        }
    }

    Sampler rng(sc.seed);
    auto rewrite = [&lifted, &seq, P](Sampler& r) {
        // pi copies of a large piece atom rewrite along b_j = b_{j+1} + a_{j+1}
        // (or the c recurrence) into copies of the two finer piece atoms
        Cert c1 = draw_cert(r, 6, 2, 2);
        const long j = 1 + static_cast<long>(r.below(2));
        const long fam = static_cast<long>(r.below(2));  // 0 -> b, 1 -> c
        const std::size_t coarse = 3 * (j - 1) + (fam == 0 ? 1 : 2);
        const std::size_t finer = 3 * j + (fam == 0 ? 1 : 2);
        const std::size_t a_pos = 3 * (j - 1);
        c1[lifted.stream_index(coarse, 0)] += seq.prime(coarse);
        Cert c2 = c1;
        c2[lifted.stream_index(coarse, 0)] -= seq.prime(coarse);
        if (c2[lifted.stream_index(coarse, 0)] == 0) c2.erase(lifted.stream_index(coarse, 0));
        c2[lifted.stream_index(finer, 0)] += seq.prime(finer);
        c2[lifted.stream_index(a_pos, 0)] += seq.prime(a_pos);
        (void)P;
        return std::make_pair(c1, c2);
    };
    rep.add(uniqueness_check(lifted, rng, std::min<std::size_t>(d, 7), 2, 2, d + 6, 20, 20,
                             rewrite));
}

// ---- main-theorem -----------------------------------------------------------

inline void run_main_theorem(const Scenario& sc, report::Report& rep) {
    const auto d = static_cast<std::size_t>(sc.depth);
    const CounterexampleParams P = build_params(sc.overrides);
    MainLiftStream stream(P);

    {  // the frozen construction: every inequality re-asserted on build
        const long lift_depth = std::max<long>(20, 2 * sc.depth + 2);
        const auto tables = build_main_lift(P, lift_depth);
        json q = json::array(), p = json::array();
        for (long k = 2; k <= 8; ++k) q.push_back(report::int_json(P.q(k)));
        for (long n = 1; n <= lift_depth; ++n) p.push_back(report::int_json(tables.row(n).p));
        json rows = json::array();
        for (long n = 1; n <= 6; ++n) {
            const auto& e = tables.row(n);
            rows.push_back(json{{"H", report::rat_json(e.H)},
                                {"K", report::rat_json(e.K)},
                                {"h", report::int_json(e.h)},
                                {"k", report::int_json(e.k)},
                                {"p", report::int_json(e.p)},
                                {"s", report::rat_json(e.s)}});
        }
        rep.add({"construction", "construction-inequalities", "pass",
                 "parameters and " + std::to_string(lift_depth) + " lift rows rebuilt",
                 json{{"b1", report::rat_json(P.b1())},
                      {"b2", report::rat_json(P.b(2))},
                      {"c1", report::rat_json(P.c1())},
                      {"delta", report::rat_json(P.delta())},
                      {"epsilon", report::rat_json(P.epsilon())},
                      {"p", p},
                      {"q", q},
                      {"rows", rows},
                      {"tail_bound", report::rat_json(P.tail_bound())}}});
    }

    auto lifted = LiftedMonoid(main_lifting_function(P, stream), 3 * d + 6,
                               main_hooks(P, stream));

    {  // every realized generator classified: a_n and the piece atoms stay
       // atoms, every s in B u C splits as H_s + K_s
        const auto ar = atoms_report(lifted, P, stream, sc.depth);
        json rows = json::array();
        for (const auto& r : ar.rows)
            rows.push_back(json{{"expected", r.expected},
                                {"label", r.label},
                                {"status", r.status},
                                {"value", report::rat_json(r.value)}});
        rep.add({"atoms", "atoms-classification", ar.status == "ok" ? "pass" : "fail",
                 std::to_string(ar.rows.size()) + " generators classified at depth " +
                     std::to_string(sc.depth),
                 json{{"rows", rows}}});
    }

    Sampler rng(sc.seed);

    {  // members at or below 1/3 lie in the free part of the base
        json rows = json::array();
        bool ok = true;
        std::vector<Rat> picks = {P.a(2), P.a(2) + P.a(3), 2 * P.a(2) + 3 * P.a(3), Rat(1, 3)};
        const long kspan = static_cast<long>(std::min<std::size_t>(d, 10));
        for (long t = 0; t < 44; ++t) {
            Rat x(0);
            const long parts = 1 + static_cast<long>(rng.below(4));
            for (long u = 0; u < parts; ++u)
                x += Rat(Int(1 + rng.below(3))) * P.a(2 + static_cast<long>(rng.below(kspan)));
            if (x <= Rat(1, 3)) picks.push_back(x);
        }
        for (const auto& x : picks) {
            const auto r = claim1_check(lifted, P, x, 3 * d + 6);
            const bool row_ok = r.status == "ok";
            ok = ok && row_ok;
            rows.push_back(json{{"note", r.note},
                                {"status", r.status},
                                {"x", report::rat_json(x)}});
        }
        rep.add({"claim-small-members", "small-members-in-free-part", ok ? "pass" : "fail",
                 std::to_string(picks.size()) + " elements checked", json{{"rows", rows}}});
    }

    {  // no doubled a_k divides b1 or c1
        json rows = json::array();
        bool ok = true;
        const long kmax = std::max<long>(3, std::min<long>(sc.depth, 10));
        for (long k = 2; k <= kmax; ++k) {
            const auto r = claim2_check(P, k);
            ok = ok && r.status == "ok";
            rows.push_back(json{{"k", k}, {"status", r.status}});
        }
        rep.add({"claim-doubled-atom", "doubled-atom-never-divides", ok ? "pass" : "fail",
                 "k = 2.." + std::to_string(kmax), json{{"rows", rows}}});
    }

    {  // the common divisors of {b1, c1} improve forever
        const auto chain = improvement_chain(P, 25);
        bool ok = true;
        json rows = json::array();
        Rat prev(0);
        for (const auto& r : chain) {
            const bool row_ok = r.divisor > prev && r.increment == P.a(r.a_index);
            ok = ok && row_ok;
            prev = r.divisor;
            rows.push_back(json{{"a_index", r.a_index},
                                {"divisor", report::rat_json(r.divisor)},
                                {"ok", row_ok}});
        }
        rep.add({"mcd-improvement", "no-maximal-common-divisor", ok ? "pass" : "fail",
                 "25 strict improvements certified", json{{"rows", rows}}});
    }

    {  // the binomial descends through every truncation without reaching
       // an irreducible factorization
        const auto dr = descent_chain(P, sc.field, 15);
        bool ok = dr.status == "ok";
        json rows = json::array();
        for (const auto& st : dr.steps) {
            ok = ok && st.reconstructed && st.cofactor_divisible;
            rows.push_back(json{{"cofactor_divisible", st.cofactor_divisible},
                                {"n", st.n},
                                {"prefix", report::rat_json(st.prefix)},
                                {"reconstructed", st.reconstructed}});
        }
        rep.add({"descent", "descent-reconstruction", ok ? "pass" : "fail",
                 "n = 2..15 over " + dr.field_label, json{{"rows", rows}}});
    }

    const std::size_t gen_count = 3 * std::min<std::size_t>(d, 8);
    auto rewrite = [&lifted, &stream, gen_count](Sampler& r) {
        // p copies of the H piece equal h copies of H plus h copies of K
        Cert c1 = draw_cert(r, gen_count, 3, 3);
        const long n = 1 + static_cast<long>(r.below(4));
        const long j = (n + 1) / 2;
        const std::size_t bi = 3 * (j - 1) + (n % 2 == 1 ? 1 : 2);
        const auto e = stream.row(n);
        const std::size_t pieceH = e.h < e.k ? 0 : 1;
        const std::size_t idxH = lifted.stream_index(bi, pieceH);
        const std::size_t idxK = lifted.stream_index(bi, 1 - pieceH);
        c1[idxH] += e.p;
        Cert c2 = c1;
        c2[idxH] -= e.p - e.h;
        c2[idxK] += e.h;
        return std::make_pair(c1, c2);
    };
    rep.add(uniqueness_check(lifted, rng, gen_count, 2, 1, 3 * d + 6, 20, 20, rewrite));

    {  // sampled instances of the projection divisibility laws
        long bad = 0;
        json entries = json::array();
        for (long t = 0; t < 40; ++t) {
            const Cert cb = draw_cert(rng, gen_count, 3, 2);
            const Cert cdiff = draw_cert(rng, gen_count, 3, 2);
            Cert cc = cb;
            for (const auto& [i, m] : cdiff) cc[i] += m;
            const auto db = lifted.canonical_decomposition(cb);
            const auto dc = lifted.canonical_decomposition(cc);
            const auto pd = lifted.check_projection_divisibility(db, dc, cdiff);
            const bool ok = pd.status == "ok";
            bad += ok ? 0 : 1;
            entries.push_back(json{{"b", report::rat_json(db.value)},
                                   {"c", report::rat_json(dc.value)},
                                   {"ok", ok}});
        }
        rep.add({"projection-divisibility", "projection-divisibility-laws",
                 bad == 0 ? "pass" : "fail",
                 "40 certified pairs, " + std::to_string(bad) + " violations",
                 json{{"entries", entries}}});
    }
}

// ---- furstenberg ------------------------------------------------------------

inline MonoidPolynomial draw_furstenberg_poly(Sampler& rng, const Domain& dom,
                                              const FieldSpec& field,
                                              const CounterexampleParams& P, long kspan) {
    const auto atom = [&] { return P.a(2 + static_cast<long>(rng.below(kspan))); };
    switch (rng.below(3)) {
        case 0: {  // monomial on a small atom sum
            Rat e(0);
            const long reps = 1 + static_cast<long>(rng.below(3));
            for (long t = 0; t < reps; ++t) e += atom();
            return MonoidPolynomial::monomial(dom, field, e, rng.coefficient(field));
        }
        case 1: {  // nonzero constant plus atom terms: linear in the atoms
            std::vector<Term> ts{{Rat(0), rng.coefficient(field)}};
            const long parts = 1 + static_cast<long>(rng.below(2));
            for (long t = 0; t < parts; ++t) ts.push_back({atom(), rng.coefficient(field)});
            return MonoidPolynomial::make(dom, field, ts);
        }
        default: {  // a common atom times a linear cofactor
            const Rat shift = atom();
            std::vector<Term> ts{{shift, rng.coefficient(field)}};
            const long parts = 1 + static_cast<long>(rng.below(2));
            for (long t = 0; t < parts; ++t)
                ts.push_back({shift + atom(), rng.coefficient(field)});
            return MonoidPolynomial::make(dom, field, ts);
        }
    }
}

inline void run_furstenberg(const Scenario& sc, report::Report& rep) {
    const auto d = static_cast<std::size_t>(sc.depth);
    const CounterexampleParams P = build_params(sc.overrides);
    auto lifted = build_main_lifted(P, 3 * d + 6);
    const Domain dom = ExponentDomain::main_monoid(P);
    Sampler rng(sc.seed);
    const long kspan = static_cast<long>(std::min<std::size_t>(d, 5));

    long inconclusive = 0;
    for (long t = 1; t <= 50; ++t) {
        MonoidPolynomial g = MonoidPolynomial::zero(dom, sc.field);
        do {
            g = draw_furstenberg_poly(rng, dom, sc.field, P, kspan);
        } while (g.is_zero() || g.is_unit());
        const auto r = furstenberg_divisor(lifted, P, g, d);
        const bool found = r.status == "ok";
        const bool product_ok = !found || mul(r.divisor, r.cofactor) == g;
        inconclusive += found ? 0 : 1;
        rep.add({two_digit_id("furstenberg", t), "irreducible-divisor-exists",
                 found && product_ok ? "pass" : (found ? "fail" : "inconclusive"),
                 found ? r.rule : r.note,
                 json{{"cofactor", report::polynomial_json(r.cofactor)},
                      {"divisor", report::polynomial_json(r.divisor)},
                      {"note", r.note},
                      {"poly", report::polynomial_json(g)},
                      {"rule", r.rule}}});
    }
    rep.add({"no-inconclusive", "furstenberg-at-depth",
             inconclusive == 0 ? "pass" : "inconclusive",
             std::to_string(inconclusive) + " inconclusive of 50",
             json{{"inconclusive", inconclusive}, {"total", 50}}});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// entry point

inline report::Report run_scenario(const Scenario& sc) {
    validate_scenario(sc);
    if (sc.name == "strongly-atomic" || sc.name == "main-theorem" || sc.name == "furstenberg")
        build_params(sc.overrides);  // configuration errors surface before any check
    report::Report rep;
    rep.scenario = sc.name;
    rep.depth = sc.depth;
    rep.field = sc.field.label();
    rep.seed = sc.seed;
    try {
        if (sc.name == "grams")
            detail::run_grams(sc, rep);
        else if (sc.name == "antimatter")
            detail::run_antimatter(sc, rep);
        else if (sc.name == "strongly-atomic")
            detail::run_strongly_atomic(sc, rep);
        else if (sc.name == "main-theorem")
            detail::run_main_theorem(sc, rep);
        else
            detail::run_furstenberg(sc, rep);
    } catch (const std::exception& e) {
        rep.add({"defect", "run-aborted", "fail", e.what(), report::json()});
    }
    return rep;
}

}  // namespace puilift
