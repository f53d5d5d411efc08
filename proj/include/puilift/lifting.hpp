#pragma once

/// The lifting construction. A lifting function assigns to selected base
/// generators s a prime pi(s) (with v_pi(s) = 0 and pi spared by the whole
/// base) and a numerical monoid N_s containing pi(s); the lifted monoid
/// M_phi is generated by the pieces (s/pi(s))*n over the minimal generators
/// n of N_s, together with the untouched base generators. Every element
/// decomposes uniquely as x0 + sum x_s with x0 in the base and s not
/// dividing x_s inside M_s; this header computes, decodes, and exploits
/// that decomposition.

#include "exact.hpp"
#include "monoid.hpp"
#include "numerical.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace puilift {

enum class Verdict { Member, NonMember, Inconclusive };

struct BaseAnswer {
    Verdict verdict = Verdict::Inconclusive;
    Cert cert;  // over base generator indexes when Member
    std::string note;
};

/// Scenario-supplied structure: complete deciders and global bounds that a
/// finite truncation cannot derive on its own. All optional; absent hooks
/// degrade to honest truncation-level fallbacks.
struct Hooks {
    /// Complete membership decider for the base monoid.
    std::function<BaseAnswer(const Rat&)> base_member;
    /// Global floor for v_p over the lifted monoid, nullopt if unbounded.
    std::function<std::optional<long>(const Int&)> valuation_bound;
    /// Whether the given base element is an atom of the base monoid.
    std::function<Verdict(const Rat&)> base_atom;
    /// Whether the given prime is pi(s) for some source s (at any index).
    std::function<Verdict(const Int&)> source_prime;
    /// A known prime divisor of n, for denominators past trial division.
    std::function<std::optional<Int>(const Int&)> factor_hint;
};

struct LiftAssignment {
    Int prime;
    std::vector<Int> n_gens;  // generators of N_s
};

/// The data (S, pi, {N_s}) over a base monoid. S is identified with the set
/// of base generator indexes that carry an assignment. Copies share the
/// memoized assignment table.
class LiftingFunction {
public:
    LiftingFunction(MonoidSpec base, std::map<std::size_t, LiftAssignment> table)
        : base_(std::move(base)), st_(std::make_shared<State>()) {
        st_->table = std::move(table);
    }

    LiftingFunction(MonoidSpec base, std::function<std::optional<LiftAssignment>(std::size_t)> fn)
        : base_(std::move(base)), st_(std::make_shared<State>()) {
        st_->fn = std::move(fn);
        st_->fn_backed = true;
    }

    const MonoidSpec& base() const { return base_; }

    std::optional<LiftAssignment> assignment(std::size_t base_index) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        auto it = st_->table.find(base_index);
        if (it != st_->table.end()) return it->second;
        if (!st_->fn_backed || st_->absent.count(base_index)) return std::nullopt;
        auto a = st_->fn(base_index);
        if (!a) {
            st_->absent.insert(base_index);
            return std::nullopt;
        }
        return st_->table.emplace(base_index, std::move(*a)).first->second;
    }

private:
    struct State {
        std::mutex mu;
        std::map<std::size_t, LiftAssignment> table;
        std::set<std::size_t> absent;
        std::function<std::optional<LiftAssignment>(std::size_t)> fn;
        bool fn_backed = false;
    };
    MonoidSpec base_;
    std::shared_ptr<State> st_;
};

struct ValidityIssue {
    std::string condition;  // injectivity | not-prime | unit-valuation |
                            // spared-valuation | prime-in-N | n-generators |
                            // normalization
    std::size_t index = 0;
    std::size_t index2 = 0;
};

struct ValidityReport {
    bool valid = true;  // normalization issues deactivate a source, they do
                        // not invalidate the function
    std::size_t depth = 0;
    std::vector<ValidityIssue> issues;
};

/// Checks the lifting-function invariants over the first `depth` indices of
/// the base generator stream. Violations are report content, not exceptions.
inline ValidityReport validate_lifting_function(const LiftingFunction& phi, std::size_t depth) {
    ValidityReport rep;
    rep.depth = depth;
    if (phi.base().is_finite()) depth = std::min(depth, phi.base().finite_size());
    std::map<Int, std::size_t> primes_seen;
    for (std::size_t i = 0; i < depth; ++i) {
        auto a = phi.assignment(i);
        if (!a) continue;
        const Rat s = phi.base().generator(i);
        if (!is_prime(a->prime)) {
            rep.issues.push_back({"not-prime", i, 0});
            rep.valid = false;
            continue;
        }
        auto it = primes_seen.find(a->prime);
        if (it != primes_seen.end()) {
            rep.issues.push_back({"injectivity", it->second, i});
            rep.valid = false;
        } else {
            primes_seen[a->prime] = i;
        }
        const Prime p(a->prime);
        if (p_adic_valuation(s, p) != 0) {
            rep.issues.push_back({"unit-valuation", i, 0});
            rep.valid = false;
        }
        for (std::size_t j = 0; j < depth; ++j) {
            if (p_adic_valuation(phi.base().generator(j), p) < 0) {
                rep.issues.push_back({"spared-valuation", i, j});
                rep.valid = false;
                break;
            }
        }
        auto gens = a->n_gens;
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        bool gens_ok = !gens.empty();
        for (const auto& g : gens) gens_ok = gens_ok && g > 0;
        if (!gens_ok) {
            rep.issues.push_back({"n-generators", i, 0});
            rep.valid = false;
            continue;
        }
        NumericalMonoid nm(gens);
        if (!nm.member(a->prime)) {
            rep.issues.push_back({"prime-in-N", i, 0});
            rep.valid = false;
        } else {
            const auto min_idx = nm.minimal_generator_indexes();
            if (min_idx.size() == 1 && gens[min_idx[0]] == a->prime)
                rep.issues.push_back({"normalization", i, 0});  // N_s == pi(s) N0
        }
    }
    return rep;
}

struct CanonicalDecomposition {
    Rat value = Rat(0);
    Rat x0 = Rat(0);
    Cert x0_cert;                       // over base generator indexes
    std::map<std::size_t, Rat> parts;   // base index -> x_s, nonzero only
    std::map<std::size_t, Int> part_n;  // base index -> n with x_s = (s/pi)*n
};

struct DecodeResult {
    enum class Status { Decomposed, CertifiedOut, Inconclusive };
    Status status = Status::Inconclusive;
    std::optional<CanonicalDecomposition> decomposition;
    std::string note;
};

struct LiftedGen {
    Rat value;
    std::size_t base_index = 0;
    std::size_t piece = 0;  // position among N_s's minimal generators
    bool from_base = true;  // the generator is the base element itself
    Int n = 0;              // the minimal generator of N_s (0 for base gens)
};

struct AtomClassification {
    enum class Kind { AtomOfMNotS, AtomOfMInSAndMs, AtomOfMs, NotAtom, Inconclusive };
    Kind kind = Kind::Inconclusive;
    std::vector<Rat> witness;  // a nontrivial split when NotAtom
    std::string note;
};

struct ProjectionDivisibilityReport {
    std::string status = "ok";  // ok | violation
    Cert part1_cert;            // certifies c0 - b0 in the base
    std::map<std::size_t, Cert> part2_certs;  // s -> cert for c0 - (b0 + s)
    std::vector<std::string> witnesses;
};

struct AccpReport {
    std::string status = "ok";  // ok | violation | inconclusive
    std::size_t steps_certified = 0;
    std::optional<std::size_t> break_index;
    std::string break_reason;  // stabilized | order | no-certificate | projection-transfer
    struct Step {
        Rat from, to, diff;
        CanonicalDecomposition diff_decomp;
        Rat from_projection, to_projection;
        bool projections_known = false;
        Cert projection_step_cert;  // to_projection divides from_projection
    };
    std::vector<Step> steps;
};

struct KmcdReport {
    std::string status = "ok";  // ok | violation | inconclusive
    std::vector<Rat> cd_base, mcd_base, cd_lifted, mcd_lifted;
    std::vector<std::pair<Rat, Rat>> lifted_cd_projections;  // (d, projection of d)
    bool projections_are_base_cds = true;
    bool mcd_projections_agree = true;
    std::vector<std::string> notes;
};

/// The lifted monoid M_phi with its canonical-decomposition machinery.
/// Copies share the memoized generator stream and source table.
class LiftedMonoid {
public:
    LiftedMonoid(LiftingFunction phi, std::size_t validation_depth, Hooks hooks = {},
                 Caps caps = {})
        : phi_(std::move(phi)), hooks_(std::move(hooks)), caps_(caps),
          st_(std::make_shared<State>()) {
        report_ = validate_lifting_function(phi_, validation_depth);
        for (const auto& is : report_.issues)
            if (is.condition != "normalization")
                throw DomainError("lifting function invalid: " + is.condition +
                                  " at index " + std::to_string(is.index));
    }

    const LiftingFunction& phi() const { return phi_; }
    const MonoidSpec& base() const { return phi_.base(); }
    const ValidityReport& validation() const { return report_; }
    const Caps& caps() const { return caps_; }

    LiftedGen generator(std::size_t k) {
        std::lock_guard<std::mutex> lk(st_->stream_mu);
        std::size_t guard = 0;
        while (st_->lifted.size() <= k) {
            if (base().is_finite() &&
                st_->next_diagonal > base().finite_size() + st_->max_count)
                throw DomainError("lifted stream: index past the last generator");
            extend_diagonal();
            if (++guard > 200000) throw CapExceeded("lifted stream: diagonal guard exceeded");
        }
        return st_->lifted[k];
    }

    /// Total number of lifted generators when the base is finite.
    std::size_t finite_piece_count() {
        if (!base().is_finite()) throw DomainError("finite_piece_count: stream base");
        std::set<Rat> values;
        for (std::size_t i = 0; i < base().finite_size(); ++i) {
            const Source& src = source(i);
            if (src.active)
                for (const auto& n : src.n_atoms) values.insert(src.scale * Rat(n));
            else
                values.insert(src.s);
        }
        return values.size();
    }

    /// First `depth` lifted generators (the full list for finite bases when
    /// depth exceeds the piece count).
    std::vector<Rat> truncation(std::size_t depth) {
        if (base().is_finite()) depth = std::min(depth, finite_piece_count());
        std::vector<Rat> out;
        out.reserve(depth);
        for (std::size_t i = 0; i < depth; ++i) out.push_back(generator(i).value);
        return out;
    }

    /// Whether base index i carries an active assignment (member of S after
    /// the normalization drop).
    bool in_S(std::size_t base_index) { return source(base_index).active; }

    Rat base_generator(std::size_t i) const { return phi_.base().generator(i); }

    /// Minimal generators of N_s, ascending.
    std::vector<Int> n_atoms(std::size_t base_index) {
        const Source& src = source(base_index);
        if (!src.active) throw DomainError("n_atoms: index not in S");
        return src.n_atoms;
    }

    // ---- canonical decomposition ----------------------------------------

    /// Constructive unique decomposition of a certified element: group the
    /// certificate by source, split the maximal multiple of s out of each
    /// M_s piece, and collect the base part x0 with its own certificate.
    CanonicalDecomposition canonical_decomposition(const Cert& cert) {
        CanonicalDecomposition d;
        std::map<std::size_t, Int> n_by_source;
        for (const auto& [idx, mult] : cert) {
            if (mult <= 0) throw DomainError("certificate multiplicities must be positive");
            const LiftedGen g = generator(idx);
            d.value += Rat(mult) * g.value;
            if (g.from_base) {
                d.x0_cert[g.base_index] += mult;
                d.x0 += Rat(mult) * g.value;
            } else {
                n_by_source[g.base_index] += mult * g.n;
            }
        }
        for (const auto& [bi, n] : n_by_source) {
            const Source& src = source(bi);
            Int m = n / src.prime;
            while (m > 0 && !src.nm->member(Int(n - m * src.prime))) --m;
            if (m > 0) {
                d.x0 += Rat(m) * src.s;
                d.x0_cert[bi] += m;
            }
            const Int nrem = n - m * src.prime;
            if (nrem > 0) {
                d.parts[bi] = src.scale * Rat(nrem);
                d.part_n[bi] = nrem;
            }
        }
        return d;
    }

    /// Semi-decision for membership in M_phi via the forced-component
    /// decoder. Three verdicts: decomposed, certified out (a valuation
    /// obstruction excludes x), or inconclusive. Source components are
    /// forced one residue class each; the residual goes to the base.
    DecodeResult decode(const Rat& x, std::size_t search_depth) {
        using St = DecodeResult::Status;
        if (x < 0) return {St::CertifiedOut, std::nullopt, "negative"};
        if (x == 0) return {St::Decomposed, CanonicalDecomposition{}, ""};
        try {
            return decode_inner(x, search_depth);
        } catch (const CapExceeded& e) {
            return {St::Inconclusive, std::nullopt, e.what()};
        }
    }

    // ---- projections -----------------------------------------------------

    /// p is the M_s-projection of something iff p lies in M_s and s does not
    /// divide p inside M_s.
    bool is_Ms_projection(std::size_t base_index, const Rat& p) {
        const Source& src = source(base_index);
        if (!src.active) throw DomainError("is_Ms_projection: index not in S");
        if (p == 0) return true;
        if (p < 0) return false;
        const Rat nr = p / src.scale;
        if (den(nr) != 1) return false;
        const Int n = num(nr);
        if (!src.nm->member(n)) return false;
        return !(n - src.prime >= 0 && src.nm->member(Int(n - src.prime)));
    }

    /// The unique complementary M_s-projection q with p_s + q in N0*s: scan
    /// the residue class -n mod pi(s) for the least member of N_s.
    Rat complementary_projection(std::size_t base_index, const Rat& p_s) {
        if (!is_Ms_projection(base_index, p_s))
            throw DomainError("complementary_projection: not an M_s-projection");
        if (p_s == 0) return Rat(0);
        const Source& src = source(base_index);
        const Int n = num(p_s / src.scale);
        const Int p = src.prime;
        std::uint64_t guard = 0;
        for (Int m = (p - n % p) % p;; m += p) {
            if (src.nm->member(m)) return src.scale * Rat(m);
            if (++guard > 10'000'000)
                throw CapExceeded("complementary_projection: search guard exceeded");
        }
    }

    /// Theorem-backed transfer: b dividing c in M_phi forces b0 | c0 in the
    /// base, and additionally (b0 + s) | c0 whenever b_s > c_s. The
    /// certificates are constructed from the difference's decomposition,
    /// never searched for; any failure is reported as a violation.
    ProjectionDivisibilityReport check_projection_divisibility(const CanonicalDecomposition& b,
                                                               const CanonicalDecomposition& c,
                                                               const Cert& diff_cert) {
        ProjectionDivisibilityReport rep;
        const CanonicalDecomposition d = canonical_decomposition(diff_cert);
        if (b.value + d.value != c.value) {
            rep.status = "violation";
            rep.witnesses.push_back("value-mismatch");
            return rep;
        }
        std::set<std::size_t> keys;
        for (const auto& [k, v] : b.parts) { (void)v; keys.insert(k); }
        for (const auto& [k, v] : c.parts) { (void)v; keys.insert(k); }
        for (const auto& [k, v] : d.parts) { (void)v; keys.insert(k); }
        auto part_of = [](const CanonicalDecomposition& dec, std::size_t k) {
            auto it = dec.parts.find(k);
            return it == dec.parts.end() ? Rat(0) : it->second;
        };
        // b_s + d_s = c_s + m_s * s with m_s a nonnegative integer
        std::map<std::size_t, Int> ms;
        for (auto k : keys) {
            const Rat excess = part_of(b, k) + part_of(d, k) - part_of(c, k);
            const Rat ratio = excess / source(k).s;
            if (ratio < 0 || den(ratio) != 1) {
                rep.status = "violation";
                rep.witnesses.push_back("part-arithmetic at base index " + std::to_string(k));
                return rep;
            }
            if (num(ratio) > 0) ms[k] = num(ratio);
        }
        Cert part1 = d.x0_cert;
        for (const auto& [k, m] : ms) part1[k] += m;
        if (base_cert_value(part1) != c.x0 - b.x0) {
            rep.status = "violation";
            rep.witnesses.push_back("part1-certificate-mismatch");
            return rep;
        }
        rep.part1_cert = part1;
        for (auto k : keys) {
            if (!(part_of(b, k) > part_of(c, k))) continue;
            auto it = ms.find(k);
            if (it == ms.end()) {
                rep.status = "violation";
                rep.witnesses.push_back("part2-multiplier-missing at base index " +
                                        std::to_string(k));
                return rep;
            }
            Cert c2 = rep.part1_cert;
            if (--c2[k] == 0) c2.erase(k);
            if (base_cert_value(c2) != c.x0 - b.x0 - source(k).s) {
                rep.status = "violation";
                rep.witnesses.push_back("part2-certificate-mismatch at base index " +
                                        std::to_string(k));
                return rep;
            }
            rep.part2_certs[k] = std::move(c2);
        }
        return rep;
    }

    // ---- atom classification ----------------------------------------------

    /// Places x in the atom partition of M_phi: an atom of the base outside
    /// S, an s in S that stays an atom in M_s, a proper atom of some M_s,
    /// not an atom at all (with a split witness), or inconclusive.
    AtomClassification classify_atom(const Rat& x, std::size_t depth) {
        using K = AtomClassification::Kind;
        if (x <= 0) return {K::Inconclusive, {}, "nonpositive"};
        auto dr = decode(x, depth);
        if (dr.status == DecodeResult::Status::CertifiedOut)
            return {K::Inconclusive, {}, "not-a-member"};
        if (dr.status == DecodeResult::Status::Inconclusive)
            return {K::Inconclusive, {}, dr.note};
        const auto& D = *dr.decomposition;
        std::vector<Rat> pieces;
        if (D.x0 != 0) pieces.push_back(D.x0);
        for (const auto& [k, v] : D.parts) {
            (void)k;
            pieces.push_back(v);
        }
        if (pieces.size() >= 2) return {K::NotAtom, pieces, "mixed-decomposition"};
        if (!D.parts.empty()) {
            // pure M_s piece: an atom exactly when n is a minimal generator
            const auto k = D.parts.begin()->first;
            const Int n = D.part_n.at(k);
            const Source& src = source(k);
            if (std::find(src.n_atoms.begin(), src.n_atoms.end(), n) != src.n_atoms.end())
                return {K::AtomOfMs, {}, ""};
            auto w = split_in_Ns(src, n);
            if (!w.empty()) return {K::NotAtom, w, "splits inside M_s"};
            return {K::Inconclusive, {}, "piece-split-not-found"};
        }
        // pure base element
        const Rat x0 = D.x0;
        Verdict atom = hooks_.base_atom ? hooks_.base_atom(x0) : truncation_atom_verdict(x0, depth);
        if (atom == Verdict::Inconclusive) return {K::Inconclusive, {}, "base-atom-unknown"};
        if (atom == Verdict::NonMember) {
            auto w = base_split(x0, depth);
            return {K::NotAtom, w, "splits inside the base monoid"};
        }
        // x0 is an atom of the base; split by membership in S. Atoms of the
        // base are generators, so locate x0 in the stream.
        for (std::size_t i = 0; i < base_limit(2 * depth + 64); ++i) {
            if (base().generator(i) != x0) continue;
            const Source& src = source(i);
            if (!src.active) return {K::AtomOfMNotS, {}, ""};
            if (std::find(src.n_atoms.begin(), src.n_atoms.end(), src.prime) !=
                src.n_atoms.end())
                return {K::AtomOfMInSAndMs, {}, ""};
            auto w = split_in_Ns(src, src.prime);
            if (!w.empty()) return {K::NotAtom, w, "s splits inside M_s"};
            return {K::Inconclusive, {}, "piece-split-not-found"};
        }
        return {K::Inconclusive, {}, "base-generator-not-located"};
    }

    // ---- chain and transfer probes ------------------------------------------

    /// Verifies that start, chain[0], chain[1], ... strictly descends with
    /// every consecutive difference a certified element of M_phi, i.e. the
    /// chain of principal ideals ascends properly. Projections of the terms
    /// are tracked and the projection-divisibility law is checked per step.
    AccpReport accp_chain_probe(const Rat& start, const std::vector<Rat>& chain,
                                std::size_t depth) {
        AccpReport rep;
        Rat prev = start;
        auto prev_dec = decode(prev, depth);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const Rat cur = chain[i];
            const Rat diff = prev - cur;
            if (diff == 0) return chain_break(rep, i, "stabilized", "inconclusive");
            if (diff < 0) return chain_break(rep, i, "order", "inconclusive");
            auto diff_dec = decode(diff, depth);
            if (diff_dec.status != DecodeResult::Status::Decomposed)
                return chain_break(rep, i, "no-certificate: " + diff_dec.note, "inconclusive");
            auto cur_dec = decode(cur, depth);
            AccpReport::Step step;
            step.from = prev;
            step.to = cur;
            step.diff = diff;
            step.diff_decomp = *diff_dec.decomposition;
            if (prev_dec.status == DecodeResult::Status::Decomposed &&
                cur_dec.status == DecodeResult::Status::Decomposed) {
                step.from_projection = prev_dec.decomposition->x0;
                step.to_projection = cur_dec.decomposition->x0;
                step.projections_known = true;
                auto pd = check_projection_divisibility(*cur_dec.decomposition,
                                                        *prev_dec.decomposition,
                                                        lifted_cert_of(*diff_dec.decomposition));
                if (pd.status != "ok")
                    return chain_break(rep, i, "projection-transfer", "violation");
                step.projection_step_cert = pd.part1_cert;
            }
            rep.steps.push_back(std::move(step));
            ++rep.steps_certified;
            prev = cur;
            prev_dec = std::move(cur_dec);
        }
        return rep;
    }

    /// Instance check of the common-divisor transfer on truncations: every
    /// common divisor in the lifted truncation projects to a common divisor
    /// in the base truncation, and the maximal ones agree through the
    /// projection. Inputs must be members of the base truncation.
    KmcdReport kmcd_transfer_check(const std::vector<Rat>& xs, std::size_t depth) {
        KmcdReport rep;
        FiniteMonoid base_fm(base().truncation(depth), caps_);
        FiniteMonoid lift_fm(truncation(depth), caps_);
        for (const auto& x : xs)
            if (!base_fm.member(x).member)
                throw DomainError("kmcd_transfer_check: input outside the base truncation");
        rep.cd_base = common_divisors_robust(base_fm, xs);
        rep.cd_lifted = common_divisors_robust(lift_fm, xs);
        // the maximality pass is quadratic in the divisor set; refuse to
        // grind through oversized sets and say so instead
        const std::size_t mcd_pass_cap = 20000;
        if (rep.cd_base.size() > mcd_pass_cap || rep.cd_lifted.size() > mcd_pass_cap) {
            rep.status = "inconclusive";
            rep.notes.push_back("common-divisor set too large for the maximality pass");
            return rep;
        }
        auto maximal_of = [](FiniteMonoid& fm, const std::vector<Rat>& cd) {
            std::vector<Rat> out;
            for (const auto& d : cd) {
                bool maximal = true;
                for (const auto& d2 : cd) {
                    if (d2 <= d) continue;
                    if (fm.member(d2 - d).member) {
                        maximal = false;
                        break;
                    }
                }
                if (maximal) out.push_back(d);
            }
            return out;
        };
        rep.mcd_base = maximal_of(base_fm, rep.cd_base);
        rep.mcd_lifted = maximal_of(lift_fm, rep.cd_lifted);
        for (const auto& d : rep.cd_lifted) {
            auto dec = decode(d, depth);
            if (dec.status != DecodeResult::Status::Decomposed) {
                rep.status = "inconclusive";
                rep.notes.push_back("decode inconclusive for " + rat_to_string(d));
                continue;
            }
            const Rat x0 = dec.decomposition->x0;
            rep.lifted_cd_projections.emplace_back(d, x0);
            bool is_base_cd = base_fm.member(x0).member;
            for (const auto& x : xs)
                is_base_cd = is_base_cd && base_fm.member(x - x0).member;
            if (!is_base_cd) {
                rep.projections_are_base_cds = false;
                rep.status = "violation";
                rep.notes.push_back("projection " + rat_to_string(x0) +
                                    " is not a base common divisor");
            }
        }
        std::set<Rat> mcd_projections;
        for (const auto& d : rep.mcd_lifted) {
            auto dec = decode(d, depth);
            if (dec.status == DecodeResult::Status::Decomposed)
                mcd_projections.insert(dec.decomposition->x0);
        }
        std::set<Rat> mcd_base_set(rep.mcd_base.begin(), rep.mcd_base.end());
        rep.mcd_projections_agree = mcd_projections == mcd_base_set;
        if (!rep.mcd_projections_agree && rep.status == "ok") rep.status = "violation";
        return rep;
    }

    // ---- certificate plumbing -----------------------------------------------

    /// Rebuilds a certificate over the lifted generator stream from a
    /// decomposition: assigned base entries expand s through N_s, parts
    /// expand n over the minimal generators of N_s.
    Cert lifted_cert_of(const CanonicalDecomposition& d) {
        Cert out;
        auto expand = [&](std::size_t bi, const Int& n, const Int& copies) {
            const Source& src = source(bi);
            auto pieces = src.nm->member(n);
            if (!pieces) throw DomainError("lifted_cert_of: value left N_s");
            for (std::size_t j = 0; j < pieces->size(); ++j)
                if ((*pieces)[j] > 0) out[stream_index(bi, j)] += copies * (*pieces)[j];
        };
        for (const auto& [bi, mult] : d.x0_cert) {
            if (source(bi).active)
                expand(bi, source(bi).prime, mult);
            else
                out[stream_index(bi, 0)] += mult;
        }
        for (const auto& [bi, n] : d.part_n) expand(bi, n, Int(1));
        return out;
    }

    Rat base_cert_value(const Cert& cert) const {
        Rat v(0);
        for (const auto& [i, m] : cert) v += Rat(m) * phi_.base().generator(i);
        return v;
    }

    /// Stream position of piece j of base index bi (an unassigned index's
    /// base element is its piece 0).
    std::size_t stream_index(std::size_t bi, std::size_t j) {
        for (std::size_t k = 0;; ++k) {
            const LiftedGen g = generator(k);
            if (g.base_index == bi && g.piece == j) return k;
            if (k > 200000) throw CapExceeded("stream_index: guard exceeded");
        }
    }

private:
    struct Source {
        Rat s;
        bool active = false;
        Int prime;
        Rat scale;  // s / prime
        std::vector<Int> n_atoms;
        std::shared_ptr<NumericalMonoid> nm;  // over n_atoms
    };

    struct State {
        std::mutex stream_mu;  // guards lifted/seen/next_diagonal
        std::mutex source_mu;  // guards sources; stream_mu may be held first
        std::map<std::size_t, Source> sources;
        std::vector<LiftedGen> lifted;
        std::set<Rat> seen;
        std::size_t next_diagonal = 0;
        std::size_t max_count = 1;  // largest piece count seen, for exhaustion
    };

    std::size_t base_limit(std::size_t want) const {
        return base().is_finite() ? std::min(want, base().finite_size()) : want;
    }

    const Source& source(std::size_t i) {
        std::lock_guard<std::mutex> lk(st_->source_mu);
        auto it = st_->sources.find(i);
        if (it != st_->sources.end()) return it->second;
        Source src;
        src.s = phi_.base().generator(i);
        if (auto a = phi_.assignment(i)) {
            auto gens = a->n_gens;
            std::sort(gens.begin(), gens.end());
            gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
            NumericalMonoid full(gens, caps_.nm);
            std::vector<Int> atoms;
            for (auto j : full.minimal_generator_indexes()) atoms.push_back(gens[j]);
            if (!(atoms.size() == 1 && atoms[0] == a->prime)) {  // normalization drop
                src.active = true;
                src.prime = a->prime;
                src.scale = src.s / Rat(a->prime);
                src.n_atoms = std::move(atoms);
                src.nm = std::make_shared<NumericalMonoid>(src.n_atoms, caps_.nm);
            }
        }
        return st_->sources.emplace(i, std::move(src)).first->second;
    }

    void extend_diagonal() {
        const std::size_t d = st_->next_diagonal++;
        const std::size_t ilim = std::min(d + 1, base_limit(d + 1));
        for (std::size_t i = 0; i < ilim; ++i) {
            const std::size_t j = d - i;
            const Source& src = source(i);
            const std::size_t cnt = src.active ? src.n_atoms.size() : 1;
            st_->max_count = std::max(st_->max_count, cnt);
            if (j >= cnt) continue;
            LiftedGen g;
            g.base_index = i;
            g.piece = j;
            if (src.active) {
                g.from_base = false;
                g.n = src.n_atoms[j];
                g.value = src.scale * Rat(g.n);
            } else {
                g.from_base = true;
                g.value = src.s;
            }
            if (st_->seen.insert(g.value).second) st_->lifted.push_back(g);
        }
    }

    DecodeResult decode_inner(const Rat& x, std::size_t search_depth) {
        using St = DecodeResult::Status;
        // sources realized within the search window, keyed by prime
        std::map<Int, std::size_t> by_prime;
        for (std::size_t i = 0; i < base_limit(search_depth); ++i) {
            const Source& src = source(i);
            if (src.active) by_prime[src.prime] = i;
        }
        // factor the denominator: realized primes, trial division, hints
        std::vector<std::pair<Int, long>> den_factors;
        {
            Int n = den(x);
            auto strip = [&](const Int& p) {
                long e = 0;
                while (n % p == 0) {
                    n /= p;
                    ++e;
                }
                if (e > 0) den_factors.emplace_back(p, e);
            };
            for (const auto& [p, si] : by_prime) {
                (void)si;
                if (n % p == 0) strip(p);
            }
            if (n % 2 == 0) strip(Int(2));
            for (Int p = 3; n > 1 && p * p <= n && p <= Int(caps_.trial_division_bound); p += 2)
                if (n % p == 0) strip(p);
            while (n > 1 && !is_prime(n) && hooks_.factor_hint) {
                auto h = hooks_.factor_hint(n);
                if (!h || n % *h != 0) break;
                strip(*h);
            }
            if (n > 1) {
                if (!is_prime(n))
                    return {St::Inconclusive, std::nullopt, "denominator-factorization"};
                const Int rem = n;  // copy: strip mutates n through the capture
                strip(rem);
            }
        }
        // classify each denominator prime: a realized source, a source
        // beyond the window (scan for it), or a residual prime
        std::vector<std::size_t> involved;
        bool unknown_prime = false;
        for (const auto& [p, e] : den_factors) {
            if (hooks_.valuation_bound) {
                auto floor_v = hooks_.valuation_bound(p);
                if (floor_v && -e < *floor_v)
                    return {St::CertifiedOut, std::nullopt,
                            "valuation-bound at prime " + p.str()};
            }
            auto it = by_prime.find(p);
            std::optional<std::size_t> si;
            if (it != by_prime.end()) {
                si = it->second;
            } else {
                Verdict v = hooks_.source_prime ? hooks_.source_prime(p) : Verdict::Inconclusive;
                if (v != Verdict::NonMember) {
                    // bounded scan past the window for a source owning p
                    for (std::size_t i = base_limit(search_depth);
                         i < base_limit(4 * search_depth + 256); ++i) {
                        const Source& src = source(i);
                        if (src.active && src.prime == p) {
                            si = i;
                            break;
                        }
                    }
                    // a finite base is scanned exhaustively, so absence is
                    // conclusive there; a stream may hide deeper sources
                    if (!si && !base().is_finite()) unknown_prime = true;
                }
            }
            if (si) {
                if (e >= 2)
                    return {St::CertifiedOut, std::nullopt,
                            "valuation-bound at prime " + p.str()};
                involved.push_back(*si);
            }
        }
        // forced candidate lists: one residue class per involved source
        struct Cand {
            Int n;
            Rat value;
        };
        std::vector<std::vector<Cand>> cands;
        for (auto si : involved) {
            const Source& src = source(si);
            const Rat z = x * Rat(src.prime) / src.s;  // v_p(z) = 0
            const Int p = src.prime;
            const Int r = num(z) % p * mod_inverse(den(z) % p, p) % p;
            const Int mmax = floor_rat(z);
            std::vector<Cand> list;
            for (Int m = r; m <= mmax; m += p) {
                if (!src.nm->member(m)) continue;
                if (m - p >= 0 && src.nm->member(Int(m - p))) continue;  // s | x_s
                list.push_back({m, src.scale * Rat(m)});
            }
            if (list.empty())
                return {St::CertifiedOut, std::nullopt,
                        "forced-component-empty at prime " + p.str()};
            cands.push_back(std::move(list));
        }
        // cartesian sweep; each residual goes to the base decider
        const bool complete_base =
            static_cast<bool>(hooks_.base_member) ||
            (base().is_finite() && search_depth >= base().finite_size());
        bool saw_inconclusive = false;
        std::vector<std::size_t> pick(cands.size(), 0);
        while (true) {
            Rat residual = x;
            for (std::size_t t = 0; t < cands.size(); ++t)
                residual -= cands[t][pick[t]].value;
            if (residual >= 0) {
                BaseAnswer ans = base_check(residual, search_depth);
                if (ans.verdict == Verdict::Member) {
                    CanonicalDecomposition d;
                    d.value = x;
                    d.x0 = residual;
                    d.x0_cert = ans.cert;
                    for (std::size_t t = 0; t < cands.size(); ++t) {
                        const auto& c = cands[t][pick[t]];
                        d.parts[involved[t]] = c.value;
                        d.part_n[involved[t]] = c.n;
                    }
                    return {St::Decomposed, d, ""};
                }
                if (ans.verdict == Verdict::Inconclusive) saw_inconclusive = true;
            }
            std::size_t t = 0;
            for (; t < pick.size(); ++t) {
                if (++pick[t] < cands[t].size()) break;
                pick[t] = 0;
            }
            if (t == pick.size()) break;
        }
        if (unknown_prime || saw_inconclusive || !complete_base)
            return {St::Inconclusive, std::nullopt, "residual-search-exhausted"};
        return {St::CertifiedOut, std::nullopt, "all-branches-excluded"};
    }

    BaseAnswer base_check(const Rat& x, std::size_t depth) {
        if (hooks_.base_member) return hooks_.base_member(x);
        if (x < 0) return {Verdict::NonMember, {}, "negative"};
        try {
            auto r = member_finite(base().truncation(depth), x, caps_);
            if (r.member) return {Verdict::Member, r.cert, ""};
            const bool complete = base().is_finite() && depth >= base().finite_size();
            return {complete ? Verdict::NonMember : Verdict::Inconclusive, {}, r.reason};
        } catch (const CapExceeded& e) {
            return {Verdict::Inconclusive, {}, e.what()};
        }
    }

    Verdict truncation_atom_verdict(const Rat& x, std::size_t depth) {
        // a split found in the truncation disproves atomness; absence is
        // conclusive only when the truncation covers a finite base
        auto w = base_split(x, depth);
        if (!w.empty()) return Verdict::NonMember;
        const bool complete = base().is_finite() && depth >= base().finite_size();
        if (!complete) return Verdict::Inconclusive;
        auto r = member_finite(base().truncation(depth), x, caps_);
        return r.member ? Verdict::Member : Verdict::Inconclusive;
    }

    std::vector<Rat> base_split(const Rat& x, std::size_t depth) {
        for (std::size_t i = 0; i < base_limit(depth); ++i) {
            const Rat g = base().generator(i);
            const Rat rest = x - g;
            if (rest <= 0) continue;
            if (base_check(rest, depth).verdict == Verdict::Member) return {g, rest};
        }
        return {};
    }

    std::vector<Rat> split_in_Ns(const Source& src, const Int& n) {
        for (const auto& a : src.n_atoms)
            if (a < n && src.nm->member(Int(n - a)))
                return {src.scale * Rat(a), src.scale * Rat(Int(n - a))};
        return {};
    }

    static AccpReport chain_break(AccpReport& rep, std::size_t i, std::string reason,
                                  std::string status) {
        rep.status = std::move(status);
        rep.break_index = i;
        rep.break_reason = std::move(reason);
        return rep;
    }

    LiftingFunction phi_;
    Hooks hooks_;
    Caps caps_;
    ValidityReport report_;
    std::shared_ptr<State> st_;
};

/// Builds the lifted monoid after validating phi at the given depth; throws
/// on any invalidating condition (normalization drops are tolerated).
inline LiftedMonoid lift_generators(LiftingFunction phi, std::size_t validation_depth,
                                    Hooks hooks = {}, Caps caps = {}) {
    return LiftedMonoid(std::move(phi), validation_depth, std::move(hooks), caps);
}

}  // namespace puilift
