#pragma once

// Monoid-algebra arithmetic F[M]: sparse polynomials with exponents in a
// Puiseux monoid and coefficients in Q or a prime field. Exponents are
// certified on entry (constructors and divisions consult the ambient
// membership decider); sums of certified exponents are certified by
// closure and are not re-checked.
//
// The factorization-descent engine rewrites X^{b_1} + X^{c_1} as
// (prod X^{a_k}) * (X^{b_n} + X^{c_n}) for every n and verifies the
// products exactly; the bounded factor search and the Furstenberg divisor
// finder only ever claim what their finite enumeration actually checked.

#include <puilift/counterexample.hpp>
#include <puilift/exact.hpp>
#include <puilift/lifting.hpp>
#include <puilift/monoid.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace puilift {

// ---------------------------------------------------------------------------
// coefficient fields

/// Q or F_p with exact arithmetic. Elements are carried as Rat; prime-field
/// elements are kept as their canonical residue in [0, p).
class FieldSpec {
public:
    static FieldSpec rationals() { return FieldSpec{}; }

    static FieldSpec prime_field(const Int& p) {
        if (!is_prime(p)) throw DomainError("prime field modulus must be prime");
        FieldSpec f;
        f.p_ = p;
        return f;
    }

    bool is_prime_field() const { return p_.has_value(); }

    const Int& modulus() const {
        if (!p_) throw DomainError("the rational field has no modulus");
        return *p_;
    }

    std::string label() const { return p_ ? "fp:" + p_->str() : "q"; }

    /// Canonical representative of c. Rejects rationals whose denominator
    /// vanishes mod p.
    Rat normalize(const Rat& c) const {
        if (!p_) return c;
        const Int& p = *p_;
        if (den(c) % p == 0)
            throw DomainError("coefficient denominator divisible by the field characteristic");
        Int r = num(c) % p;
        if (r < 0) r += p;
        if (den(c) != 1) r = (r * mod_inverse(den(c) % p, p)) % p;
        return Rat(r);
    }

    Rat add(const Rat& x, const Rat& y) const { return normalize(x + y); }
    Rat sub(const Rat& x, const Rat& y) const { return normalize(x - y); }
    Rat mul(const Rat& x, const Rat& y) const { return normalize(x * y); }

    Rat inverse(const Rat& c) const {
        const Rat n = normalize(c);
        if (n == 0) throw DomainError("field inverse of zero");
        if (!p_) return 1 / n;
        return Rat(mod_inverse(num(n), *p_));
    }

    Rat div(const Rat& x, const Rat& y) const { return mul(x, inverse(y)); }

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.p_ == b.p_; }
    friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }

private:
    std::optional<Int> p_;
};

// ---------------------------------------------------------------------------
// exponent domains

/// Named membership authority for exponents. Polynomials hold a shared
/// handle; two polynomials interoperate when their domain labels agree.
/// member(x) = true means x carries a certificate; false means no
/// certificate was produced (which is a refusal, not always a disproof --
/// the factories below document which deciders are complete).
class ExponentDomain {
public:
    ExponentDomain(std::string label, std::function<bool(const Rat&)> member)
        : label_(std::move(label)), member_(std::move(member)) {}

    const std::string& label() const { return label_; }

    bool member(const Rat& x) const {
        if (x < 0) return false;
        if (x == 0) return true;
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
        const bool ok = member_(x);
        cache_.emplace(x, ok);
        return ok;
    }

    /// All of Q>=0; the ambient for generic ring-law examples.
    static std::shared_ptr<const ExponentDomain> rationals_nonneg() {
        return std::make_shared<ExponentDomain>("q-nonneg", [](const Rat&) { return true; });
    }

    /// Membership by bounded certificate search over a fixed generator list.
    static std::shared_ptr<const ExponentDomain> from_generators(std::string label,
                                                                 std::vector<Rat> gens,
                                                                 Caps caps = {}) {
        return std::make_shared<ExponentDomain>(
            std::move(label), [gens = std::move(gens), caps](const Rat& x) {
                return member_finite(gens, x, caps).member;
            });
    }

    /// The base monoid of the main construction. Complete below 1, peels
    /// the single forced large generator on [1, 2), refuses beyond.
    static std::shared_ptr<const ExponentDomain> main_monoid(const CounterexampleParams& P) {
        return std::make_shared<ExponentDomain>("main-monoid", [P](const Rat& x) {
            if (x < 1) return membership_M(P, x).verdict == MemVerdict::Member;
            if (x < 2) return main_base_member(P, x).verdict == Verdict::Member;
            return false;
        });
    }

private:
    std::string label_;
    std::function<bool(const Rat&)> member_;
    mutable std::mutex mu_;
    mutable std::map<Rat, bool> cache_;
};

using Domain = std::shared_ptr<const ExponentDomain>;

// ---------------------------------------------------------------------------
// polynomials

struct Term {
    Rat exp;
    Rat coef;

    friend bool operator==(const Term& a, const Term& b) {
        return a.exp == b.exp && a.coef == b.coef;
    }
};

/// Immutable sparse polynomial: terms strictly increasing by exponent, no
/// zero coefficients, the empty list is zero.
class MonoidPolynomial {
public:
    static MonoidPolynomial zero(Domain dom, FieldSpec field) {
        return MonoidPolynomial(std::move(dom), std::move(field), {});
    }

    static MonoidPolynomial constant(Domain dom, FieldSpec field, const Rat& c) {
        return make(std::move(dom), std::move(field), {{Rat(0), c}});
    }

    static MonoidPolynomial monomial(Domain dom, FieldSpec field, const Rat& exp,
                                     const Rat& coef = Rat(1)) {
        return make(std::move(dom), std::move(field), {{exp, coef}});
    }

    /// Validates every exponent against the ambient domain, normalizes
    /// coefficients, merges duplicate exponents, drops zeros.
    static MonoidPolynomial make(Domain dom, FieldSpec field, std::vector<Term> terms) {
        if (!dom) throw DomainError("polynomial needs an ambient domain");
        std::map<Rat, Rat> acc;
        for (const auto& t : terms) {
            if (t.exp < 0) throw DomainError("negative exponent");
            if (!dom->member(t.exp))
                throw DomainError("exponent not certified in ambient '" + dom->label() +
                                  "': " + rat_to_string(t.exp));
            const Rat c = field.normalize(t.coef);
            if (c == 0) continue;
            auto [it, fresh] = acc.emplace(t.exp, c);
            if (!fresh) {
                it->second = field.add(it->second, c);
                if (it->second == 0) acc.erase(it);
            }
        }
        std::vector<Term> out;
        out.reserve(acc.size());
        for (const auto& [e, c] : acc) out.push_back({e, c});
        return MonoidPolynomial(std::move(dom), std::move(field), std::move(out));
    }

    const std::vector<Term>& terms() const { return terms_; }
    const Domain& domain() const { return dom_; }
    const FieldSpec& field() const { return field_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_unit() const { return terms_.size() == 1 && terms_[0].exp == 0; }

    friend bool operator==(const MonoidPolynomial& a, const MonoidPolynomial& b) {
        return a.field_ == b.field_ && a.dom_->label() == b.dom_->label() &&
               a.terms_ == b.terms_;
    }
    friend bool operator!=(const MonoidPolynomial& a, const MonoidPolynomial& b) {
        return !(a == b);
    }

private:
    MonoidPolynomial(Domain dom, FieldSpec field, std::vector<Term> terms)
        : dom_(std::move(dom)), field_(std::move(field)), terms_(std::move(terms)) {}

    // Exponents already certified by the caller (closure under addition, or
    // re-use of certified exponents); skips the membership pass.
    static MonoidPolynomial trusted(Domain dom, FieldSpec field, std::map<Rat, Rat> acc) {
        std::vector<Term> out;
        out.reserve(acc.size());
        for (const auto& [e, c] : acc)
            if (c != 0) out.push_back({e, c});
        return MonoidPolynomial(std::move(dom), std::move(field), std::move(out));
    }

    friend MonoidPolynomial add(const MonoidPolynomial&, const MonoidPolynomial&);
    friend MonoidPolynomial neg(const MonoidPolynomial&);
    friend MonoidPolynomial mul(const MonoidPolynomial&, const MonoidPolynomial&);
    friend std::optional<MonoidPolynomial> monomial_divide(const MonoidPolynomial&, const Rat&);

    Domain dom_;
    FieldSpec field_;
    std::vector<Term> terms_;
};

namespace detail {
inline void require_compatible(const MonoidPolynomial& f, const MonoidPolynomial& g) {
    if (f.field() != g.field()) throw DomainError("field mismatch");
    if (f.domain()->label() != g.domain()->label())
        throw DomainError("ambient monoid mismatch: '" + f.domain()->label() + "' vs '" +
                          g.domain()->label() + "'");
}
}  // namespace detail

inline MonoidPolynomial add(const MonoidPolynomial& f, const MonoidPolynomial& g) {
    detail::require_compatible(f, g);
    std::map<Rat, Rat> acc;
    for (const auto& t : f.terms()) acc[t.exp] = t.coef;
    for (const auto& t : g.terms()) {
        auto [it, fresh] = acc.emplace(t.exp, t.coef);
        if (!fresh) it->second = f.field().add(it->second, t.coef);
    }
    return MonoidPolynomial::trusted(f.domain(), f.field(), std::move(acc));
}

inline MonoidPolynomial neg(const MonoidPolynomial& f) {
    std::map<Rat, Rat> acc;
    for (const auto& t : f.terms()) acc[t.exp] = f.field().sub(Rat(0), t.coef);
    return MonoidPolynomial::trusted(f.domain(), f.field(), std::move(acc));
}

inline MonoidPolynomial sub(const MonoidPolynomial& f, const MonoidPolynomial& g) {
    return add(f, neg(g));
}

/// Exact product. Exponent sums stay in the monoid by closure: both inputs
/// carry certified exponents, so sums are certified by certificate addition
/// and no fresh membership decision is needed.
inline MonoidPolynomial mul(const MonoidPolynomial& f, const MonoidPolynomial& g) {
    detail::require_compatible(f, g);
    std::map<Rat, Rat> acc;
    for (const auto& a : f.terms())
        for (const auto& b : g.terms()) {
            const Rat e = a.exp + b.exp;
            const Rat c = f.field().mul(a.coef, b.coef);
            auto [it, fresh] = acc.emplace(e, c);
            if (!fresh) it->second = f.field().add(it->second, c);
        }
    return MonoidPolynomial::trusted(f.domain(), f.field(), std::move(acc));
}

inline std::vector<Rat> support(const MonoidPolynomial& f) {
    std::vector<Rat> s;
    s.reserve(f.terms().size());
    for (const auto& t : f.terms()) s.push_back(t.exp);
    return s;
}

inline Rat ord(const MonoidPolynomial& f) {
    if (f.is_zero()) throw DomainError("ord of the zero polynomial");
    return f.terms().front().exp;
}

inline Rat deg(const MonoidPolynomial& f) {
    if (f.is_zero()) throw DomainError("deg of the zero polynomial");
    return f.terms().back().exp;
}

/// f = X^a * g with every shifted exponent certified in the ambient, or
/// nullopt when some exponent difference gets no certificate.
inline std::optional<MonoidPolynomial> monomial_divide(const MonoidPolynomial& f, const Rat& a) {
    if (a < 0) throw DomainError("monomial_divide requires a >= 0");
    if (a == 0) return f;
    std::map<Rat, Rat> acc;
    for (const auto& t : f.terms()) {
        const Rat e = t.exp - a;
        if (e < 0 || !f.domain()->member(e)) return std::nullopt;
        acc[e] = t.coef;
    }
    return MonoidPolynomial::trusted(f.domain(), f.field(), std::move(acc));
}

/// Exact division by leading-term elimination: f = g * h with every
/// intermediate exponent difference certified; nullopt when elimination
/// stalls or the budget runs out. A successful result is verified by
/// multiplying back.
inline std::optional<MonoidPolynomial> poly_divide(const MonoidPolynomial& f,
                                                   const MonoidPolynomial& g,
                                                   std::uint64_t budget = 4096) {
    detail::require_compatible(f, g);
    if (g.is_zero()) throw DomainError("division by the zero polynomial");
    MonoidPolynomial r = f;
    MonoidPolynomial h = MonoidPolynomial::zero(f.domain(), f.field());
    const Rat glead_exp = deg(g);
    const Rat glead_coef = g.terms().back().coef;
    while (!r.is_zero()) {
        if (budget-- == 0) return std::nullopt;
        const Rat e = deg(r) - glead_exp;
        if (e < 0 || !f.domain()->member(e)) return std::nullopt;
        const Rat c = f.field().div(r.terms().back().coef, glead_coef);
        const MonoidPolynomial t = MonoidPolynomial::monomial(f.domain(), f.field(), e, c);
        h = add(h, t);
        r = sub(r, mul(t, g));
    }
    if (mul(g, h) != f) return std::nullopt;
    return h;
}

// ---------------------------------------------------------------------------
// the descent chain

struct DescentStep {
    long n = 0;
    Rat prefix;            // tail(n) = a_2 + ... + a_n
    bool reconstructed = false;
    Rat a_next;
    bool cofactor_divisible = false;
};

struct DescentReport {
    std::string status = "ok";
    std::string field_label;
    long n_max = 0;
    std::vector<DescentStep> steps;
};

/// For every n <= n_max: X^{b_1} + X^{c_1} = (prod_{k=2}^{n} X^{a_k}) *
/// (X^{b_n} + X^{c_n}), verified by exact multiplication, and the cofactor
/// is again divisible by X^{a_{n+1}}. A failed identity is a defect and
/// throws.
inline DescentReport descent_chain(const CounterexampleParams& P, const FieldSpec& field,
                                   long n_max) {
    if (n_max < 2) throw DomainError("descent_chain requires n_max >= 2");
    const Domain dom = ExponentDomain::main_monoid(P);
    const auto binomial = [&](long n) {
        return MonoidPolynomial::make(dom, field, {{P.b(n), Rat(1)}, {P.c(n), Rat(1)}});
    };
    const MonoidPolynomial f = binomial(1);

    DescentReport rep;
    rep.field_label = field.label();
    rep.n_max = n_max;
    for (long n = 2; n <= n_max; ++n) {
        DescentStep step;
        step.n = n;
        step.prefix = P.tail(n);
        const MonoidPolynomial prefix =
            MonoidPolynomial::monomial(dom, field, step.prefix);
        const MonoidPolynomial cofactor = binomial(n);
        step.reconstructed = (mul(prefix, cofactor) == f);
        if (!step.reconstructed)
            throw DomainError("descent defect at n = " + std::to_string(n) +
                              ": product does not reconstruct f");
        step.a_next = P.a(n + 1);
        const auto next = monomial_divide(cofactor, step.a_next);
        step.cofactor_divisible = next.has_value() && *next == binomial(n + 1);
        if (!step.cofactor_divisible)
            throw DomainError("descent defect at n = " + std::to_string(n) +
                              ": cofactor not divisible by the next atom");
        rep.steps.push_back(std::move(step));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// bounded factor search

struct FactorBounds {
    std::size_t support_bound = 2;    // max terms in an enumerated divisor
    std::size_t max_factors = 2;      // recursion depth for reducibility flags
    std::size_t lattice_cap = 2048;   // max exponent-lattice size
    std::uint64_t budget = 200000;    // total enumeration steps
};

struct FactorizationCandidate {
    MonoidPolynomial g, h;  // f = g * h, both nonunits, verified exactly
    bool g_reducible_within_bounds = false;
    bool h_reducible_within_bounds = false;
};

struct FactorSearchReport {
    std::string evidence = "bounded evidence";
    std::string status = "complete-within-bounds";  // or resource-bound-exceeded
    std::size_t lattice_size = 0;
    std::vector<FactorizationCandidate> candidates;
    bool factored = false;
    bool irreducible_within_bounds = false;
    std::string note;
};

namespace detail {

/// All sums of multisets over gens that stay <= bound, ascending. Returns
/// false when the cap or budget is hit (the lattice is then a prefix of the
/// truth and any "irreducible" claim must be withheld).
inline bool exponent_lattice(const std::vector<Rat>& gens, const Rat& bound,
                             std::size_t cap, std::uint64_t& budget, std::vector<Rat>& out) {
    std::vector<Rat> sorted = gens;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<Rat> positive;
    for (const auto& g : sorted)
        if (g > 0 && g <= bound) positive.push_back(g);

    std::map<Rat, bool> seen;
    seen.emplace(Rat(0), true);
    std::vector<Rat> frontier = {Rat(0)};
    bool complete = true;
    while (!frontier.empty() && complete) {
        std::vector<Rat> next;
        for (const auto& x : frontier) {
            for (const auto& g : positive) {
                if (budget == 0 || seen.size() >= cap) {
                    complete = false;
                    break;
                }
                --budget;
                const Rat y = x + g;
                if (y > bound) continue;
                if (seen.emplace(y, true).second) next.push_back(y);
            }
            if (!complete) break;
        }
        frontier = std::move(next);
    }
    out.clear();
    out.reserve(seen.size());
    for (const auto& [x, _] : seen) out.push_back(x);
    return complete;
}

inline std::vector<Rat> coefficient_palette(const FieldSpec& field) {
    if (!field.is_prime_field()) return {Rat(1), Rat(-1)};
    std::vector<Rat> out;
    for (Int r = 1; r < field.modulus(); ++r) out.push_back(Rat(r));
    return out;
}

}  // namespace detail

/// Enumerates candidate factorizations f = g * h with supp g inside the
/// finite lattice of generator sums below deg f, g normalized monic with
/// non-leading coefficients from a fixed palette (all nonzero residues over
/// a prime field; the units +-1 over Q). Every reported identity is exact;
/// the report never claims more than the enumeration covered.
inline FactorSearchReport bounded_factor_search(const MonoidPolynomial& f,
                                                const std::vector<Rat>& gens,
                                                const FactorBounds& bounds) {
    if (f.is_zero()) throw DomainError("bounded_factor_search of the zero polynomial");
    if (f.is_unit()) throw DomainError("bounded_factor_search of a unit");
    FactorSearchReport rep;
    std::uint64_t budget = bounds.budget;

    std::vector<Rat> lattice;
    const bool lattice_complete =
        detail::exponent_lattice(gens, deg(f), bounds.lattice_cap, budget, lattice);
    rep.lattice_size = lattice.size();
    if (!lattice_complete) rep.status = "resource-bound-exceeded";

    const Rat f_ord = ord(f);
    auto push_candidate = [&](MonoidPolynomial g, MonoidPolynomial h) {
        FactorizationCandidate cand{std::move(g), std::move(h), false, false};
        if (bounds.max_factors >= 2) {
            FactorBounds sub = bounds;
            sub.max_factors = 1;
            sub.budget = bounds.budget / 4 + 1;
            cand.g_reducible_within_bounds =
                bounded_factor_search(cand.g, gens, sub).factored;
            cand.h_reducible_within_bounds =
                bounded_factor_search(cand.h, gens, sub).factored;
        }
        rep.candidates.push_back(std::move(cand));
        rep.factored = true;
    };

    // monomial divisors X^a, 0 < a <= ord f
    for (const auto& a : lattice) {
        if (a <= 0 || a > f_ord) continue;
        if (budget == 0) {
            rep.status = "resource-bound-exceeded";
            break;
        }
        --budget;
        const auto h = monomial_divide(f, a);
        if (!h || h->is_unit()) continue;
        push_candidate(MonoidPolynomial::monomial(f.domain(), f.field(), a), *h);
    }

    // divisors with 2..support_bound terms, monic, palette coefficients
    const std::vector<Rat> palette = detail::coefficient_palette(f.field());
    const std::size_t nmax = std::min(bounds.support_bound, lattice.size());
    std::vector<std::size_t> idx;
    std::function<void(std::size_t, std::size_t)> enumerate = [&](std::size_t start,
                                                                  std::size_t want) {
        if (budget == 0) {
            rep.status = "resource-bound-exceeded";
            return;
        }
        if (want == 0) {
            if (lattice[idx.front()] > f_ord) return;  // ord g <= ord f
            std::vector<Rat> coefs(idx.size() - 1, Rat(0));
            std::function<void(std::size_t)> assign = [&](std::size_t pos) {
                if (budget == 0) {
                    rep.status = "resource-bound-exceeded";
                    return;
                }
                if (pos + 1 == idx.size()) {
                    --budget;
                    std::vector<Term> terms;
                    for (std::size_t i = 0; i + 1 < idx.size(); ++i)
                        terms.push_back({lattice[idx[i]], coefs[i]});
                    terms.push_back({lattice[idx.back()], Rat(1)});
                    const MonoidPolynomial g =
                        MonoidPolynomial::make(f.domain(), f.field(), std::move(terms));
                    const auto h = poly_divide(f, g, 512);
                    if (h && !h->is_unit() && !g.is_unit()) push_candidate(g, *h);
                    return;
                }
                for (const auto& c : palette) {
                    coefs[pos] = c;
                    assign(pos + 1);
                    if (budget == 0) return;
                }
            };
            assign(0);
            return;
        }
        for (std::size_t i = start; i + want <= lattice.size(); ++i) {
            idx.push_back(i);
            enumerate(i + 1, want - 1);
            idx.pop_back();
            if (budget == 0) return;
        }
    };
    for (std::size_t n = 2; n <= nmax && budget > 0; ++n) {
        idx.clear();
        enumerate(0, n);
    }

    rep.irreducible_within_bounds =
        rep.candidates.empty() && rep.status == "complete-within-bounds";
    if (!f.field().is_prime_field())
        rep.note = "rational coefficient palette limited to the units 1 and -1";
    return rep;
}

// ---------------------------------------------------------------------------
// the Furstenberg divisor finder

struct FurstenbergResult {
    std::string status;  // ok | inconclusive
    std::string rule;    // which rule produced the divisor
    MonoidPolynomial divisor, cofactor;
    std::string note;
};

namespace detail {

/// Forced atom decomposition of every support exponent via the small-degree
/// claim machinery; each exponent below 1/3 in the lifted monoid lies in
/// the free monoid on the a_k. nullopt when the decoder ran out of depth;
/// an actual escape from the A component is a defect and throws.
inline std::optional<std::vector<std::map<long, Int>>> support_atom_coords(
    LiftedMonoid& lifted, const CounterexampleParams& P, const MonoidPolynomial& g,
    std::size_t depth) {
    std::vector<std::map<long, Int>> coords;
    for (const auto& t : g.terms()) {
        const Claim1Report rep = claim1_check(lifted, P, t.exp, depth);
        if (rep.status == "inconclusive") return std::nullopt;
        if (rep.status != "ok" || !rep.note.empty())
            throw DomainError("support exponent escaped the A component: " +
                              rat_to_string(t.exp));
        coords.push_back(rep.a_coeff);
    }
    return coords;
}

inline FurstenbergResult furstenberg_impl(LiftedMonoid& lifted, const CounterexampleParams& P,
                                          const MonoidPolynomial& g, std::size_t depth,
                                          int rounds) {
    const Domain& dom = g.domain();
    const FieldSpec& F = g.field();
    const MonoidPolynomial unit_cof = MonoidPolynomial::constant(dom, F, Rat(1));
    auto inconclusive = [&](std::string note) {
        return FurstenbergResult{"inconclusive", "bounded-search", g, unit_cof,
                                 std::move(note)};
    };
    auto finish = [&](FurstenbergResult r) {
        if (mul(r.divisor, r.cofactor) != g)
            throw DomainError("furstenberg divisor failed the multiply-back check");
        return r;
    };
    if (rounds <= 0) return inconclusive("recursion bound exhausted");

    const auto maybe_coords = support_atom_coords(lifted, P, g, depth);
    if (!maybe_coords) return inconclusive("support decomposition ran out of depth");
    const auto& coords = *maybe_coords;

    // rule: atom monomial. A monomial whose exponent is a single atom is
    // irreducible outright (monomials only factor into monomials, and the
    // a_k generate freely); otherwise peel one atom off the exponent.
    if (g.is_monomial()) {
        const auto& v = coords.front();
        if (v.size() == 1 && v.begin()->second == 1)
            return finish({"ok", "atom-monomial", g, unit_cof,
                           "the exponent is a single atom"});
        const long k = v.begin()->first;
        return finish({"ok", "atom-monomial",
                       MonoidPolynomial::monomial(dom, F, P.a(k)),
                       MonoidPolynomial::monomial(dom, F, deg(g) - P.a(k),
                                                  g.terms()[0].coef),
                       "peeled one atom off the exponent"});
    }

    // rule: common atom. Some a_k divides every support exponent; X^{a_k}
    // is an irreducible common monomial divisor.
    {
        std::map<long, Int> common = coords.front();
        for (std::size_t i = 1; i < coords.size() && !common.empty(); ++i) {
            std::map<long, Int> next;
            for (const auto& [k, e] : common) {
                auto it = coords[i].find(k);
                if (it != coords[i].end() && it->second >= 1 && e >= 1)
                    next[k] = std::min(e, it->second);
            }
            common = std::move(next);
        }
        if (!common.empty()) {
            const long k = common.begin()->first;
            const auto cof = monomial_divide(g, P.a(k));
            if (!cof)
                throw DomainError("common atom failed to divide: a_" + std::to_string(k));
            return finish({"ok", "common-atom",
                           MonoidPolynomial::monomial(dom, F, P.a(k)), *cof,
                           "a_" + std::to_string(k) + " divides every support exponent"});
        }
    }

    // rule: linear in the atom variables. When every exponent is 0 or a
    // single atom, g has total degree 1 in the free algebra on the atoms,
    // hence is irreducible.
    {
        bool linear = true;
        for (const auto& v : coords) {
            Int total = 0;
            for (const auto& [k, e] : v) {
                (void)k;
                total += e;
            }
            if (total > 1) {
                linear = false;
                break;
            }
        }
        if (linear)
            return finish({"ok", "linear-in-atoms", g, unit_cof,
                           "total degree 1 in the atom variables"});
    }

    // bounded search over the atoms realized in the support, then recurse
    // on a found factor (strictly smaller degree).
    std::vector<Rat> gens;
    for (const auto& v : coords)
        for (const auto& [k, e] : v) {
            (void)e;
            gens.push_back(P.a(k));
        }
    FactorBounds bounds;
    bounds.support_bound = 3;
    bounds.max_factors = 1;  // no reducibility flags needed here
    const FactorSearchReport search = bounded_factor_search(g, gens, bounds);
    if (search.factored) {
        const MonoidPolynomial& u = search.candidates.front().g;
        const MonoidPolynomial& v = search.candidates.front().h;
        const FurstenbergResult inner = furstenberg_impl(lifted, P, u, depth, rounds - 1);
        if (inner.status != "ok") return inconclusive("recursion stalled: " + inner.note);
        return finish({"ok", inner.rule, inner.divisor, mul(inner.cofactor, v),
                       "via bounded split, then: " + inner.note});
    }
    if (search.irreducible_within_bounds && F.is_prime_field())
        // over a prime field the palette covers every nonzero residue, so
        // the enumeration is complete for the declared lattice
        return finish({"ok", "bounded-search", g, unit_cof,
                       "no proper factorization in the declared truncation"});
    return inconclusive("bounded search found nothing decisive");
}

}  // namespace detail

/// An irreducible divisor of g (deg g < 1/3) with exact cofactor. The
/// support decomposes into the free monoid on the a_k; the divisor comes
/// from one of the decisive rules (atom monomial, common atom, linear in
/// the atom variables) or a bounded search, and each rule's irreducibility
/// argument is recorded in the note. Depth exhaustion is reported as
/// inconclusive, never guessed away.
inline FurstenbergResult furstenberg_divisor(LiftedMonoid& lifted,
                                             const CounterexampleParams& P,
                                             const MonoidPolynomial& g, std::size_t depth) {
    if (g.is_zero()) throw DomainError("furstenberg_divisor of the zero polynomial");
    if (g.is_unit()) throw DomainError("furstenberg_divisor of a unit");
    if (!(deg(g) < Rat(1, 3))) throw DomainError("furstenberg_divisor requires deg g < 1/3");
    if (g.domain()->label() != "main-monoid")
        throw DomainError("furstenberg_divisor expects the main-monoid ambient");
    return detail::furstenberg_impl(lifted, P, g, depth, 16);
}

}  // namespace puilift
