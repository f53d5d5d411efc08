#pragma once
// counterexample.hpp
//
// Canonical instantiation of the non-2-MCD base monoid M = <A u B u C>
// and its main lifted monoid, together with complete valuation-based
// membership deciders (scoped below 1) and the common-divisor improvement
// engine that witnesses failure of 2-MCD.
//
// Construction data, all exact rationals:
//   epsilon = 1/16 by default, epsilon < 1/10 always
//   q_n     = the smallest prime exceeding 2^(n+offset), offset 6 by default
//   a_n     = 1/q_n                                  (n >= 2, the set A)
//   b_n     = b_1 - (a_2 + ... + a_n), same for c_n  (the sets B and C)
//   b_1, c_1 in (1 - epsilon/8, 1) with distinct spared prime denominators
//   delta   = half of min(L - (1 - epsilon/4), 1 - max(b_1, c_1)) where
//             L = min(b_1, c_1) - tail_bound underestimates inf(B u C)
//
// The lift interleaves s_1, s_2, ... = b_1, c_1, b_2, c_2, ... and assigns
// each s_n a prime p_n > max(p_{n-1}, ceil(s_n/delta)) avoiding every
// denominator prime of the construction, plus N_{s_n} = <h_n, k_n> with
// h_n + k_n = p_n and h_n tuned so that H_s lands delta-close to its
// family target (1/2 - epsilon for B, 1/2 for C).

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "puilift/exact.hpp"
#include "puilift/lifting.hpp"
#include "puilift/monoid.hpp"

namespace puilift {

// ---------------------------------------------------------------------------
// parameters

struct ParamOverrides {
    std::optional<Rat> epsilon;
    std::optional<Rat> b1;
    std::optional<Rat> c1;
    std::optional<long> q_offset;
};

class CounterexampleParams {
public:
    Rat epsilon() const { return epsilon_; }
    Rat b1() const { return b1_; }
    Rat c1() const { return c1_; }
    Rat delta() const { return delta_; }
    Rat tail_bound() const { return tail_bound_; }
    long q_offset() const { return offset_; }
    Int b1_prime() const { return den(b1_); }
    Int c1_prime() const { return den(c1_); }

    /// q_n, the n-th unit-fraction denominator (n >= 2). Memoized.
    Int q(long n) const {
        if (n < 2) throw DomainError("q index must be at least 2");
        std::lock_guard<std::mutex> lk(memo_->mu);
        while (static_cast<long>(memo_->q.size()) < n - 1)
            memo_->q.push_back(
                next_prime(pow2(static_cast<long>(memo_->q.size()) + 2 + offset_)));
        return memo_->q[static_cast<std::size_t>(n - 2)];
    }

    Rat a(long n) const { return Rat(1, q(n)); }

    /// a_2 + ... + a_n; zero when n < 2.
    Rat tail(long n) const {
        Rat t(0);
        for (long k = 2; k <= n; ++k) t += a(k);
        return t;
    }

    Rat b(long n) const {
        if (n < 1) throw DomainError("b index must be at least 1");
        return b1_ - tail(n);
    }

    Rat c(long n) const {
        if (n < 1) throw DomainError("c index must be at least 1");
        return c1_ - tail(n);
    }

    /// The window test: p equals some q_k iff p is the least prime above
    /// the power of two just below it and that power is 2^(k+offset).
    std::optional<long> q_index(const Int& p) const {
        if (p <= 2 || !is_prime(p)) return std::nullopt;
        const long m = static_cast<long>(boost::multiprecision::msb(p));
        const long k = m - offset_;
        if (k < 2) return std::nullopt;
        if (q(k) == p) return k;
        return std::nullopt;
    }

    /// Whether p has nonnegative valuation on every a_n (p differs from
    /// every q_k). b and c denominators are reported separately.
    bool spared_by_A(const Int& p) const { return !q_index(p).has_value(); }

private:
    friend CounterexampleParams build_params(const ParamOverrides&);

    struct Memo {
        std::mutex mu;
        std::vector<Int> q;  // q[i] = q_{i+2}
    };

    Rat epsilon_, b1_, c1_, delta_, tail_bound_;
    long offset_ = 6;
    std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

/// Builds and fully validates a parameter set. Throws DomainError naming
/// the violated inequality.
inline CounterexampleParams build_params(const ParamOverrides& over) {
    CounterexampleParams p;
    p.epsilon_ = over.epsilon.value_or(Rat(1, 16));
    p.b1_ = over.b1.value_or(Rat(130, 131));
    p.c1_ = over.c1.value_or(Rat(136, 137));
    p.offset_ = over.q_offset.value_or(6);

    auto fail = [](const std::string& ineq) {
        throw DomainError("params invariant violated: " + ineq);
    };
    if (!(p.epsilon_ > 0 && p.epsilon_ < Rat(1, 10))) fail("0 < epsilon < 1/10");
    if (p.offset_ < 1 || p.offset_ > 40) fail("1 <= q_offset <= 40");

    // geometric tail: sum_{n>=2} 1/q_n < sum_{n>=2} 2^-(n+offset) = 2^-(offset+1)
    p.tail_bound_ = Rat(1, pow2(p.offset_ + 1));
    if (!(p.tail_bound_ <= p.epsilon_ / 8)) fail("tail_bound <= epsilon/8");

    const Rat lo = 1 - p.epsilon_ / 8;
    if (!(p.b1_ > lo && p.b1_ < 1)) fail("b1 in (1 - epsilon/8, 1)");
    if (!(p.c1_ > lo && p.c1_ < 1)) fail("c1 in (1 - epsilon/8, 1)");
    if (!is_prime(den(p.b1_))) fail("d(b1) prime");
    if (!is_prime(den(p.c1_))) fail("d(c1) prime");
    if (den(p.b1_) == den(p.c1_)) fail("d(b1) != d(c1)");
    if (!p.spared_by_A(den(p.b1_))) fail("d(b1) spared by A");
    if (!p.spared_by_A(den(p.c1_))) fail("d(c1) spared by A");

    // delta: half the allowed minimum, with L = min(b1,c1) - tail_bound
    // underestimating inf(B u C) (a safe tightening).
    const Rat L = std::min(p.b1_, p.c1_) - p.tail_bound_;
    const Rat slack1 = L - (1 - p.epsilon_ / 4);
    const Rat slack2 = 1 - std::max(p.b1_, p.c1_);
    if (!(slack1 > 0)) fail("L > 1 - epsilon/4");
    if (!(slack2 > 0)) fail("max(b1, c1) < 1");
    p.delta_ = std::min(slack1, slack2) / 2;
    if (!(p.delta_ > 0)) fail("delta > 0");
    return p;
}

inline CounterexampleParams build_default_params() { return build_params({}); }

// ---------------------------------------------------------------------------
// main lift tables

struct MainLiftEntry {
    long n = 0;        // 1-based position in the s-sequence
    char family = 0;   // 'b' or 'c'
    long member = 0;   // j with s_n = b_j or c_j
    Rat s;
    Int p;
    Int h, k;
    Rat H, K;
    Rat tau;           // family target: 1/2 - epsilon for B, 1/2 for C
};

/// Lazily extending, memoized s_n/p_n/h_n/k_n tables. Every row is fully
/// checked against the construction inequalities on creation; a violation
/// is a defect and throws. Copies share the table.
class MainLiftStream {
public:
    explicit MainLiftStream(CounterexampleParams params)
        : params_(std::move(params)), st_(std::make_shared<State>()) {}

    const CounterexampleParams& params() const { return params_; }

    MainLiftEntry row(long n) const {
        if (n < 1) throw DomainError("main lift row index must be positive");
        std::lock_guard<std::mutex> lk(st_->mu);
        while (static_cast<long>(st_->rows.size()) < n) extend();
        return st_->rows[static_cast<std::size_t>(n - 1)];
    }

    /// Whether p equals p_n for some n. Complete: the p_n are strictly
    /// increasing, so the scan stops once they pass p.
    bool is_lift_prime(const Int& p) const {
        std::lock_guard<std::mutex> lk(st_->mu);
        std::size_t i = 0;
        for (;; ++i) {
            if (i == st_->rows.size()) extend();
            if (st_->rows[i].p == p) return true;
            if (st_->rows[i].p > p) return false;
        }
    }

private:
    struct State {
        mutable std::mutex mu;
        std::vector<MainLiftEntry> rows;
    };

    void extend() const {
        const auto& P = params_;
        MainLiftEntry e;
        e.n = static_cast<long>(st_->rows.size()) + 1;
        e.member = (e.n + 1) / 2;
        e.family = (e.n % 2 == 1) ? 'b' : 'c';
        e.s = (e.family == 'b') ? P.b(e.member) : P.c(e.member);
        e.tau = (e.family == 'b') ? Rat(1, 2) - P.epsilon() : Rat(1, 2);

        auto fail = [&](const std::string& ineq) {
            throw DomainError("main lift row " + std::to_string(e.n) +
                              ": " + ineq + " violated");
        };
        if (!(e.s > 1 - P.epsilon() / 4 && e.s < 1)) fail("s in (1 - epsilon/4, 1)");

        // p_n: smallest prime past max(p_{n-1}, ceil(s/delta)) that avoids
        // every construction denominator and does not divide s.
        const Rat ratio = e.s / P.delta();
        Int floor_from = (num(ratio) + den(ratio) - 1) / den(ratio);  // ceil
        if (!st_->rows.empty() && st_->rows.back().p > floor_from)
            floor_from = st_->rows.back().p;
        e.p = next_prime_satisfying(floor_from, [&](const Int& cand) {
            if (cand == P.b1_prime() || cand == P.c1_prime()) return false;
            if (!P.spared_by_A(cand)) return false;
            return num(e.s) % cand != 0 && den(e.s) % cand != 0;
        });
        if (!st_->rows.empty() && !(e.p > st_->rows.back().p))
            fail("p strictly increasing");
        if (!(e.s / Rat(e.p) < P.delta())) fail("s/p < delta");
        if (p_adic_valuation(e.s, e.p) != 0) fail("v_p(s) = 0");

        // h_n: |h s/p - tau| is (s/p)|h - tau p/s|, strictly unimodal in h,
        // so the floor/ceil pair around tau p/s covers the argmin; ties go
        // to the smaller h.
        const Rat t = e.tau * Rat(e.p) / e.s;
        Int h = floor_rat(t);
        {
            const Rat lo_err = abs(Rat(h) - t), hi_err = abs(Rat(h + 1) - t);
            if (hi_err < lo_err) h += 1;
        }
        if (h < 2) h = 2;
        if (h > e.p - 2) h = e.p - 2;
        e.h = h;
        e.k = e.p - e.h;
        e.H = e.s * Rat(e.h) / Rat(e.p);
        e.K = e.s * Rat(e.k) / Rat(e.p);

        if (!(e.h >= 2 && e.h <= e.p - 2)) fail("h in [2, p-2]");
        if (!(e.k >= 2 && e.k <= e.p - 2)) fail("k in [2, p-2]");
        if (gcd(e.h, e.k) != 1) fail("gcd(h, k) = 1");
        if (e.H + e.K != e.s) fail("H + K = s");
        if (!(abs(e.H - e.tau) < P.delta())) fail("|H - tau| < delta");
        const Rat half(1, 2), eps = P.epsilon();
        if (e.family == 'b') {
            if (!(abs(e.H - (half - eps)) < eps / 2)) fail("|H - (1/2 - epsilon)| < epsilon/2");
            if (!(abs(e.K - (half + eps)) < eps / 2)) fail("|K - (1/2 + epsilon)| < epsilon/2");
        } else {
            if (!(abs(e.H - half) < eps / 4)) fail("|H - 1/2| < epsilon/4");
            if (!(abs(e.K - half) < eps / 4)) fail("|K - 1/2| < epsilon/4");
        }
        const Rat m = std::min(e.H, e.K);
        if (!(m > half - 3 * eps / 2)) fail("min M_s > 1/2 - 3 epsilon/2");
        if (!(m > Rat(1, 3))) fail("min M_s > 1/3");

        st_->rows.push_back(std::move(e));
    }

    CounterexampleParams params_;
    std::shared_ptr<State> st_;
};

struct MainLiftTables {
    CounterexampleParams params;
    std::vector<MainLiftEntry> rows;

    const MainLiftEntry& row(long n) const {
        if (n < 1 || n > static_cast<long>(rows.size()))
            throw DomainError("main lift table row out of range");
        return rows[static_cast<std::size_t>(n - 1)];
    }
};

inline MainLiftTables build_main_lift(const CounterexampleParams& params, long depth) {
    if (depth < 1) throw DomainError("main lift depth must be positive");
    MainLiftStream st(params);
    MainLiftTables t{params, {}};
    t.rows.reserve(static_cast<std::size_t>(depth));
    for (long n = 1; n <= depth; ++n) t.rows.push_back(st.row(n));
    return t;
}

// ---------------------------------------------------------------------------
// membership deciders

enum class MemVerdict { Member, NonMember, OutOfScope };

struct MembershipA {
    MemVerdict verdict = MemVerdict::OutOfScope;
    std::map<long, Int> coeff;  // k -> multiplicity of a_k
    std::string reason;         // NonMember: the violated condition
    Rat witness;                // offending prime or nonzero remainder
};

/// Complete membership decider for <A> at any x >= 0. Every coefficient is
/// forced modulo its prime by the valuation of x, so the minimal candidate
/// representation is unique; x is a member iff the integer remainder is
/// nonnegative (integers are q_2 copies of a_2).
inline MembershipA membership_A_any(const CounterexampleParams& P, const Rat& x) {
    if (x < 0) throw DomainError("membership_A requires x >= 0");
    MembershipA r;
    if (x == 0) {
        r.verdict = MemVerdict::Member;
        return r;
    }
    Int d = den(x);
    std::vector<std::pair<long, long>> qexp;  // (k, multiplicity of q_k)
    for (long k = 2;; ++k) {
        const Int qk = P.q(k);
        if (qk > d) break;
        long e = 0;
        while (d % qk == 0) {
            d /= qk;
            ++e;
        }
        if (e > 0) qexp.emplace_back(k, e);
    }
    // any prime factor of the leftover is not a q_k (all q_k <= den were
    // tried), so x carries a negative valuation no member can have
    if (d > 1) {
        r.verdict = MemVerdict::NonMember;
        r.reason = "denominator-prime-outside-A";
        r.witness = Rat(d);
        return r;
    }
    Rat forced(0);
    for (const auto& [k, e] : qexp) {
        const Int qk = P.q(k);
        if (e > 1) {
            r.verdict = MemVerdict::NonMember;
            r.reason = "valuation-below-minus-one";
            r.witness = Rat(qk);
            return r;
        }
        const Int w = den(x) / qk;
        Int ck = (num(x) % qk) * mod_inverse(w % qk, qk) % qk;
        if (ck < 0) ck += qk;
        r.coeff[k] = ck;
        forced += Rat(ck, qk);
    }
    const Rat rem = x - forced;  // an integer: den(x) was exactly prod q_k
    if (rem < 0) {
        r.verdict = MemVerdict::NonMember;
        r.reason = "forced-remainder-negative";
        r.witness = rem;
        r.coeff.clear();
        return r;
    }
    if (num(rem) > 0) r.coeff[2] += num(rem) * P.q(2);
    r.verdict = MemVerdict::Member;
    return r;
}

/// The scoped decider: complete on [0, 1), OutOfScope past 1.
inline MembershipA membership_A(const CounterexampleParams& P, const Rat& x) {
    if (x < 0) throw DomainError("membership_A requires x >= 0");
    if (x >= 1) {
        MembershipA r;
        r.verdict = MemVerdict::OutOfScope;
        r.reason = "x >= 1";
        return r;
    }
    return membership_A_any(P, x);
}

inline Rat a_cert_value(const CounterexampleParams& P, const std::map<long, Int>& coeff) {
    Rat v(0);
    for (const auto& [k, ck] : coeff) v += Rat(ck, P.q(k));
    return v;
}

struct MembershipM {
    MemVerdict verdict = MemVerdict::OutOfScope;
    std::map<long, Int> a_coeff;
    std::optional<std::pair<char, long>> bc;  // the single B u C generator used
    std::string reason;
    Rat witness;
};

inline Rat m_cert_value(const CounterexampleParams& P, const MembershipM& m) {
    Rat v = a_cert_value(P, m.a_coeff);
    if (m.bc) v += (m.bc->first == 'b') ? P.b(m.bc->second) : P.c(m.bc->second);
    return v;
}

namespace detail {
/// 1 + the largest k with q_k dividing d; the forced-coefficient argument
/// shows that searching b_n (or c_n) past this index only re-subtracts
/// coefficients that the added a_n terms force right back.
inline long stabilization_index(const CounterexampleParams& P, const Int& d) {
    long best = 1;
    Int rem = d;
    for (long k = 2;; ++k) {
        const Int qk = P.q(k);
        if (qk > rem) break;
        if (rem % qk == 0) {
            best = k;
            while (rem % qk == 0) rem /= qk;
        }
    }
    return best + 1;
}
}  // namespace detail

/// Complete membership decider for M = <A u B u C> on [0, 1). Any two
/// B u C generators sum past 1, so a member below 1 uses at most one, and
/// the denominator valuations at d(b1), d(c1) reveal which family.
inline MembershipM membership_M(const CounterexampleParams& P, const Rat& x) {
    if (x < 0 || x >= 1) throw DomainError("membership_M requires 0 <= x < 1");
    MembershipM r;
    const long vb = x == 0 ? 0 : p_adic_valuation(x, P.b1_prime());
    const long vc = x == 0 ? 0 : p_adic_valuation(x, P.c1_prime());
    if (vb <= -2 || vc <= -2) {
        r.verdict = MemVerdict::NonMember;
        r.reason = "valuation-below-minus-one";
        r.witness = Rat(vb <= -2 ? P.b1_prime() : P.c1_prime());
        return r;
    }
    if (vb == -1 && vc == -1) {
        // would need one generator from each family; their sum exceeds 1
        r.verdict = MemVerdict::NonMember;
        r.reason = "two-large-generators-exceed-one";
        r.witness = x;
        return r;
    }
    if (vb >= 0 && vc >= 0) {
        const MembershipA a = membership_A(P, x);
        r.verdict = a.verdict;
        r.a_coeff = a.coeff;
        r.reason = a.reason;
        r.witness = a.witness;
        return r;
    }
    const char family = (vb == -1) ? 'b' : 'c';
    const long nstar = detail::stabilization_index(P, den(x));
    for (long n = 1; n <= nstar; ++n) {
        const Rat g = (family == 'b') ? P.b(n) : P.c(n);
        const Rat y = x - g;
        if (y < 0) continue;
        const MembershipA a = membership_A(P, y);
        if (a.verdict == MemVerdict::Member) {
            r.verdict = MemVerdict::Member;
            r.a_coeff = a.coeff;
            r.bc = std::make_pair(family, n);
            return r;
        }
    }
    r.verdict = MemVerdict::NonMember;
    r.reason = "forced-family-unreachable";
    r.witness = x;
    return r;
}

// ---------------------------------------------------------------------------
// common divisors of B u C subsets and the improvement engine

struct BCIndex {
    char family = 'b';  // 'b' or 'c'
    long n = 1;
};

struct CommonDivisorResult {
    Rat divisor;   // a_{m+1} with m the largest selected index
    long a_index;  // m+1
    std::vector<std::pair<BCIndex, MembershipM>> certs;  // x - divisor in M
};

inline CommonDivisorResult common_divisor_of_BC_subset(const CounterexampleParams& P,
                                                       const std::vector<BCIndex>& subset) {
    if (subset.empty())
        throw DomainError("common_divisor_of_BC_subset: empty subset");
    long m = 1;
    for (const auto& ix : subset) {
        if (ix.n < 1 || (ix.family != 'b' && ix.family != 'c'))
            throw DomainError("common_divisor_of_BC_subset: bad index");
        m = std::max(m, ix.n);
    }
    CommonDivisorResult out;
    out.a_index = m + 1;
    out.divisor = P.a(m + 1);
    for (const auto& ix : subset) {
        const Rat x = (ix.family == 'b') ? P.b(ix.n) : P.c(ix.n);
        MembershipM cert = membership_M(P, x - out.divisor);
        if (cert.verdict != MemVerdict::Member)
            throw DomainError("common divisor certificate failed at " +
                              std::string(1, ix.family) + "_" + std::to_string(ix.n));
        out.certs.emplace_back(ix, std::move(cert));
    }
    return out;
}

struct ImproveResult {
    Rat divisor;    // d' = d + increment, strictly larger
    Rat increment;  // the fresh A element
    long a_index;
    MembershipM cert_b, cert_c;  // b1 - d' and c1 - d' in M
};

/// One improvement step: any certified common divisor d of {b1, c1} lies in
/// <A>, both residues are divisible by B u C generators, and those two
/// generators share a fresh A-divisor; d plus that divisor is a strictly
/// larger common divisor. Iterating witnesses that no common divisor of
/// {b1, c1} is maximal.
inline ImproveResult improve_common_divisor(const CounterexampleParams& P, const Rat& d) {
    if (d < 0 || d >= 1) throw DomainError("improve_common_divisor: d out of range");
    const MembershipA in_A = membership_A(P, d);
    if (in_A.verdict != MemVerdict::Member)
        throw DomainError("improve_common_divisor: divisor not in <A>");
    const MembershipM rb = membership_M(P, P.b1() - d);
    const MembershipM rc = membership_M(P, P.c1() - d);
    if (rb.verdict != MemVerdict::Member || rc.verdict != MemVerdict::Member)
        throw DomainError("improve_common_divisor: d is not a common divisor");
    if (!rb.bc || rb.bc->first != 'b' || !rc.bc || rc.bc->first != 'c')
        throw DomainError("improve_common_divisor: residue misses its family generator");
    const CommonDivisorResult fresh = common_divisor_of_BC_subset(
        P, {BCIndex{'b', rb.bc->second}, BCIndex{'c', rc.bc->second}});

    ImproveResult out;
    out.increment = fresh.divisor;
    out.a_index = fresh.a_index;
    out.divisor = d + fresh.divisor;
    out.cert_b = membership_M(P, P.b1() - out.divisor);
    out.cert_c = membership_M(P, P.c1() - out.divisor);
    if (out.cert_b.verdict != MemVerdict::Member ||
        out.cert_c.verdict != MemVerdict::Member)
        throw DomainError("improve_common_divisor: improved divisor failed certification");
    return out;
}

/// The strictly increasing chain d_0 = 0 < d_1 < ... < d_steps.
inline std::vector<ImproveResult> improvement_chain(const CounterexampleParams& P,
                                                    long steps) {
    std::vector<ImproveResult> chain;
    Rat d(0);
    for (long i = 0; i < steps; ++i) {
        chain.push_back(improve_common_divisor(P, d));
        if (!(chain.back().divisor > d))
            throw DomainError("improvement chain not strictly increasing");
        d = chain.back().divisor;
    }
    return chain;
}

// ---------------------------------------------------------------------------
// the main lifted monoid

/// Base generator stream: a_2, b_1, c_1, a_3, b_2, c_2, a_4, ...
inline MonoidSpec main_base_spec(const CounterexampleParams& P) {
    return MonoidSpec::stream(
        [P](std::size_t i) -> Rat {
            const long j = static_cast<long>(i / 3);
            switch (i % 3) {
                case 0: return P.a(j + 2);
                case 1: return P.b(j + 1);
                default: return P.c(j + 1);
            }
        },
        "main-base");
}

namespace detail {
/// Base stream index -> s-sequence index (b_j at 2j-1, c_j at 2j), or
/// nullopt for the A positions.
inline std::optional<long> s_index_of_base(std::size_t i) {
    const long j = static_cast<long>(i / 3);
    if (i % 3 == 1) return 2 * j + 1;
    if (i % 3 == 2) return 2 * j + 2;
    return std::nullopt;
}
}  // namespace detail

inline LiftingFunction main_lifting_function(const CounterexampleParams& P,
                                             const MainLiftStream& stream) {
    return LiftingFunction(
        main_base_spec(P), [stream](std::size_t i) -> std::optional<LiftAssignment> {
            const auto n = detail::s_index_of_base(i);
            if (!n) return std::nullopt;
            const MainLiftEntry e = stream.row(*n);
            return LiftAssignment{e.p, {e.h, e.k}};
        });
}

/// Complete base membership below 1 (membership_M); bounded-complete on
/// [1, 2) by peeling the single forced large generator; honest
/// Inconclusive beyond.
inline BaseAnswer main_base_member(const CounterexampleParams& P, const Rat& x) {
    BaseAnswer ans;
    auto to_cert = [&](const std::map<long, Int>& a_coeff,
                       const std::optional<std::pair<char, long>>& bc) {
        Cert c;
        for (const auto& [k, ck] : a_coeff)
            c[static_cast<std::size_t>(3 * (k - 2))] = ck;
        if (bc) {
            const std::size_t i = static_cast<std::size_t>(3 * (bc->second - 1)) +
                                  (bc->first == 'b' ? 1 : 2);
            c[i] += 1;
        }
        return c;
    };
    if (x < 0) {
        ans.verdict = Verdict::NonMember;
        ans.note = "negative";
        return ans;
    }
    if (x < 1) {
        const MembershipM m = membership_M(P, x);
        if (m.verdict == MemVerdict::Member) {
            ans.verdict = Verdict::Member;
            ans.cert = to_cert(m.a_coeff, m.bc);
        } else {
            ans.verdict = Verdict::NonMember;
            ans.note = m.reason;
        }
        return ans;
    }
    if (x >= 2) {
        ans.note = "beyond-decider-scope";
        return ans;
    }
    // x in [1, 2): at most two B u C generators fit; peel the forced one
    const long vb = p_adic_valuation(x, P.b1_prime());
    const long vc = p_adic_valuation(x, P.c1_prime());
    if (vb <= -2 || vc <= -2) {
        ans.verdict = Verdict::NonMember;
        ans.note = "valuation-below-minus-one";
        return ans;
    }
    if (vb >= 0 && vc >= 0) {
        const MembershipA a = membership_A_any(P, x);
        if (a.verdict == MemVerdict::Member) {
            ans.verdict = Verdict::Member;
            ans.cert = to_cert(a.coeff, std::nullopt);
        } else {
            ans.note = "possible-multi-generator-element";
        }
        return ans;
    }
    const char family = (vb == -1) ? 'b' : 'c';
    const long nstar = detail::stabilization_index(P, den(x));
    for (long n = 1; n <= nstar; ++n) {
        const Rat g = (family == 'b') ? P.b(n) : P.c(n);
        const Rat y = x - g;
        if (y < 0) continue;
        const BaseAnswer rest = main_base_member(P, y);  // y < 1 + epsilon/4
        if (rest.verdict == Verdict::Member) {
            ans.verdict = Verdict::Member;
            ans.cert = rest.cert;
            const std::size_t i = static_cast<std::size_t>(3 * (n - 1)) +
                                  (family == 'b' ? 1 : 2);
            ans.cert[i] += 1;
            return ans;
        }
    }
    ans.note = "large-element-peel-exhausted";
    return ans;
}

/// Scenario hooks for the main lift: complete membership and atom deciders
/// for the base, the global valuation floor, and the source-prime test.
inline Hooks main_hooks(const CounterexampleParams& P, const MainLiftStream& stream) {
    Hooks h;
    h.base_member = [P](const Rat& x) { return main_base_member(P, x); };
    h.valuation_bound = [P, stream](const Int& p) -> std::optional<long> {
        // every generator of the lifted monoid has valuation >= -1 at the
        // construction primes and >= 0 elsewhere
        if (p == P.b1_prime() || p == P.c1_prime()) return -1;
        if (P.q_index(p)) return -1;
        if (stream.is_lift_prime(p)) return -1;
        return 0;
    };
    h.base_atom = [P](const Rat& x) -> Verdict {
        // atoms of the base are exactly the a_k: unit numerator over a q_k
        if (x <= 0 || x >= 1) return Verdict::NonMember;
        if (num(x) == 1 && P.q_index(den(x))) return Verdict::Member;
        return Verdict::NonMember;
    };
    h.source_prime = [P, stream](const Int& p) -> Verdict {
        // no p_n collides with a construction denominator, so those are
        // settled without touching the stream; the scan stays proportional
        // to the table size actually needed
        if (p == P.b1_prime() || p == P.c1_prime() || P.q_index(p))
            return Verdict::NonMember;
        return stream.is_lift_prime(p) ? Verdict::Member : Verdict::NonMember;
    };
    return h;
}

/// One-call construction of the main lifted monoid.
inline LiftedMonoid build_main_lifted(const CounterexampleParams& P,
                                      std::size_t validation_depth, Caps caps = {}) {
    MainLiftStream stream(P);
    return LiftedMonoid(main_lifting_function(P, stream), validation_depth,
                        main_hooks(P, stream), caps);
}

// ---------------------------------------------------------------------------
// claims and the atoms report

struct Claim1Report {
    Rat x;
    std::string status;  // ok | violation | inconclusive
    std::string note;
    std::optional<CanonicalDecomposition> decomposition;
    std::map<long, Int> a_coeff;
};

/// Lifted members at or below 1/3 lie in <A>: every nonzero M_s part
/// exceeds 1/3, so the decomposition must be a pure base element, and a
/// base member that small cannot afford a B u C generator.
inline Claim1Report claim1_check(LiftedMonoid& lifted, const CounterexampleParams& P,
                                 const Rat& x, std::size_t depth) {
    if (x < 0 || x > Rat(1, 3))
        throw DomainError("claim1_check requires 0 <= x <= 1/3");
    Claim1Report rep;
    rep.x = x;
    const DecodeResult dec = lifted.decode(x, depth);
    if (dec.status == DecodeResult::Status::CertifiedOut) {
        rep.status = "ok";
        rep.note = "vacuous: " + dec.note;
        return rep;
    }
    if (dec.status == DecodeResult::Status::Inconclusive) {
        rep.status = "inconclusive";
        rep.note = dec.note;
        return rep;
    }
    rep.decomposition = dec.decomposition;
    if (!dec.decomposition->parts.empty()) {
        rep.status = "violation";
        rep.note = "nonzero-part-at-or-below-one-third";
        return rep;
    }
    const MembershipA a = membership_A(P, x);
    if (a.verdict != MemVerdict::Member) {
        rep.status = "violation";
        rep.note = "lifted-member-outside-A: " + a.reason;
        return rep;
    }
    rep.status = "ok";
    rep.a_coeff = a.coeff;
    return rep;
}

struct Claim2Report {
    long k = 0;
    std::string status;  // ok | violation
    MembershipM against_b1, against_c1;
};

/// No doubled A generator divides b1 or c1 (in the lift this reduces to
/// the base by the projection laws; the base instance is decided exactly).
inline Claim2Report claim2_check(const CounterexampleParams& P, long k) {
    if (k < 2) throw DomainError("claim2_check requires k >= 2");
    Claim2Report rep;
    rep.k = k;
    rep.against_b1 = membership_M(P, P.b1() - 2 * P.a(k));
    rep.against_c1 = membership_M(P, P.c1() - 2 * P.a(k));
    rep.status = (rep.against_b1.verdict == MemVerdict::NonMember &&
                  rep.against_c1.verdict == MemVerdict::NonMember)
                     ? "ok"
                     : "violation";
    return rep;
}

struct AtomRow {
    std::string label;
    Rat value;
    std::string expected;  // atom-of-base | atom-of-Ms | not-atom
    std::string status;    // ok | violation | inconclusive
    std::string note;
};

struct AtomsReport {
    std::string status = "ok";  // ok | violation | inconclusive
    std::vector<AtomRow> rows;
};

/// Classifies every realized generator of the lifted monoid: the a_n stay
/// atoms, every H_s and K_s is a fresh atom, and every s splits as
/// H_s + K_s.
inline AtomsReport atoms_report(LiftedMonoid& lifted, const CounterexampleParams& P,
                                const MainLiftStream& stream, long depth) {
    if (depth < 1) throw DomainError("atoms_report depth must be positive");
    AtomsReport rep;
    using K = AtomClassification::Kind;
    auto add = [&](std::string label, const Rat& value, std::string expected,
                   K want, const std::string& extra) {
        AtomRow row;
        row.label = std::move(label);
        row.value = value;
        row.expected = std::move(expected);
        const AtomClassification got =
            lifted.classify_atom(value, static_cast<std::size_t>(3 * depth + 6));
        if (got.kind == want) {
            row.status = "ok";
            row.note = extra;
        } else if (got.kind == K::Inconclusive) {
            row.status = "inconclusive";
            row.note = got.note;
        } else {
            row.status = "violation";
            row.note = "unexpected-classification: " + got.note;
        }
        if (row.status == "violation")
            rep.status = "violation";
        else if (row.status == "inconclusive" && rep.status == "ok")
            rep.status = "inconclusive";
        rep.rows.push_back(std::move(row));
    };

    for (long n = 2; n <= depth + 1; ++n) {
        const MembershipA a = membership_A(P, P.a(n));
        std::string extra;
        if (a.verdict != MemVerdict::Member || a.coeff != std::map<long, Int>{{n, Int(1)}}) {
            AtomRow row;
            row.label = "a_" + std::to_string(n);
            row.value = P.a(n);
            row.expected = "atom-of-base";
            row.status = "violation";
            row.note = "forced-representation-not-unit";
            rep.rows.push_back(std::move(row));
            rep.status = "violation";
            continue;
        }
        add("a_" + std::to_string(n), P.a(n), "atom-of-base", K::AtomOfMNotS,
            "unique-forced-representation");
    }
    for (long n = 1; n <= depth; ++n) {
        const MainLiftEntry e = stream.row(n);
        const std::string tag = std::string(1, e.family) + "_" + std::to_string(e.member);
        std::string gcd_note = "gcd(h,k)=1";
        if (gcd(e.h, e.k) != 1 || e.h == e.p || e.k == e.p) {
            rep.status = "violation";
            gcd_note = "N_s-shape-violated";
        }
        add("H_" + tag, e.H, "atom-of-Ms", K::AtomOfMs, gcd_note);
        add("K_" + tag, e.K, "atom-of-Ms", K::AtomOfMs, gcd_note);
        if (e.H + e.K != e.s) {
            AtomRow row;
            row.label = tag;
            row.value = e.s;
            row.expected = "not-atom";
            row.status = "violation";
            row.note = "H+K differs from s";
            rep.rows.push_back(std::move(row));
            rep.status = "violation";
            continue;
        }
        add(tag, e.s, "not-atom", K::NotAtom, "splits-as-H-plus-K");
    }
    return rep;
}

}  // namespace puilift
