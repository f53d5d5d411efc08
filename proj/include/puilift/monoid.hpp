#pragma once

/// Puiseux monoid core: generator lists over the nonnegative rationals,
/// membership with multiplicity certificates, divisibility, atoms,
/// factorizations, common divisors and maximal common divisors.
///
/// Every answer is exact. Membership routes between three complete
/// strategies: the integer DP for small scaled targets, a forced-residue
/// search that pins one multiplicity per unique-carrier prime, and the
/// Apery table. A query outside every route's cap throws CapExceeded.

#include "exact.hpp"
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

/// Multiplicity certificate: generator index -> positive multiplicity.
using Cert = std::map<std::size_t, Int>;

struct Caps {
    NmCaps nm{};
    std::uint64_t enum_leaf_cap = 100'000;       // max factorizations listed
    std::uint64_t trial_division_bound = 1'000'000;
};

inline Rat cert_value(const std::vector<Rat>& gens, const Cert& c) {
    Rat v(0);
    for (const auto& [i, m] : c) {
        if (i >= gens.size()) throw DomainError("certificate index out of range");
        if (m <= 0) throw DomainError("certificate multiplicities must be positive");
        v += gens[i] * Rat(m);
    }
    return v;
}

inline bool verify_certificate(const std::vector<Rat>& gens, const Rat& x, const Cert& c) {
    try {
        return cert_value(gens, c) == x;
    } catch (const DomainError&) {
        return false;
    }
}

struct MemberResult {
    bool member = false;
    Cert cert;           // valid when member
    std::string reason;  // obstruction slug when not a member
};

struct SparingReport {
    bool spared = true;
    std::size_t checked = 0;
    std::optional<std::size_t> violation;  // first index with negative valuation
};

/// p is spared by the listed generators when none has a pole at p.
inline SparingReport sparing_witness(const std::vector<Rat>& gens, const Int& p) {
    const Prime pr(p);
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (gens[i] != 0 && p_adic_valuation(gens[i], pr) < 0)
            return {false, i + 1, i};
    return {true, gens.size(), std::nullopt};
}

/// Finitely generated Puiseux monoid with cached scaled tables. Generator
/// order is the caller's; certificates index that order.
class FiniteMonoid {
public:
    explicit FiniteMonoid(std::vector<Rat> gens, Caps caps = {},
                          std::vector<Int> prime_basis = {})
        : gens_(std::move(gens)), caps_(caps), basis_(std::move(prime_basis)) {
        L_ = 1;
        for (const auto& g : gens_) {
            if (g <= 0) throw DomainError("FiniteMonoid: generators must be positive");
            L_ = boost::multiprecision::lcm(L_, den(g));
        }
        for (const auto& g : gens_) w_.push_back(num(g) * (L_ / den(g)));
        {
            auto sorted = w_;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw DomainError("FiniteMonoid: duplicate generators");
        }
        perm_.resize(gens_.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = i;
        std::sort(perm_.begin(), perm_.end(),
                  [&](std::size_t a, std::size_t b) { return w_[a] < w_[b]; });
        for (const auto& g : gens_) den_factors_.push_back(factor(den(g)));
        for (const auto& df : den_factors_)
            for (const auto& [p, e] : df) {
                auto it = prime_set_.find(p);
                if (it == prime_set_.end() || it->second < e) prime_set_[p] = e;
            }
        fits64_ = true;
        for (const auto& w : w_)
            if (w > Int(std::numeric_limits<std::uint64_t>::max() / 2)) fits64_ = false;
    }

    const std::vector<Rat>& gens() const { return gens_; }
    const Int& scale() const { return L_; }

    MemberResult member(const Rat& x) {
        if (x < 0) return {false, {}, "negative"};
        if (x == 0) return {true, {}, ""};
        if (gens_.empty()) return {false, {}, "exhausted"};
        const Rat scaled = x * Rat(L_);
        if (den(scaled) != 1) return {false, {}, "denominator-obstruction"};
        const Int T = num(scaled);
        if (fits64_ && T <= Int(caps_.nm.dp_cap)) {
            auto c = nm().member(T);
            if (!c) return {false, {}, "exhausted"};
            return {true, from_sorted(*c), ""};
        }
        try {
            return dfs_first(x);
        } catch (const CapExceeded&) {
            if (!fits64_) throw;
            auto c = nm().member(T);  // Apery route; may itself throw
            if (!c) return {false, {}, "exhausted"};
            return {true, from_sorted(*c), ""};
        }
    }

    /// Certificate that c - b lies in the monoid (b divides c), if it does.
    std::optional<Cert> divides(const Rat& b, const Rat& c) {
        if (c < b) return std::nullopt;
        auto r = member(c - b);
        if (!r.member) return std::nullopt;
        return r.cert;
    }

    /// Indexes of generators that are atoms (equivalently, the minimal
    /// generating set: g_j is an atom unless g_j - g_i lies in the monoid
    /// for some other generator g_i).
    std::vector<std::size_t> atom_indexes() {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < gens_.size(); ++j) {
            bool minimal = true;
            for (std::size_t i = 0; i < gens_.size() && minimal; ++i) {
                const Rat diff = gens_[j] - gens_[i];
                if (diff > 0 && member(diff).member) minimal = false;
            }
            if (minimal) out.push_back(j);
        }
        return out;
    }

    std::vector<Rat> atoms() {
        std::vector<Rat> out;
        for (auto j : atom_indexes()) out.push_back(gens_[j]);
        std::sort(out.begin(), out.end());
        return out;
    }

    struct Factorizations {
        std::vector<Rat> atoms;        // ascending
        std::vector<Cert> items;       // certificates over `atoms`, lex order
    };

    /// All factorizations of x into atoms, in lex order of the exponent
    /// vector over the ascending atom list. Complete under the leaf cap.
    Factorizations factorizations(const Rat& x) {
        Factorizations out;
        out.atoms = atoms();
        if (x < 0) return out;
        if (x == 0) {
            out.items.push_back({});
            return out;
        }
        FiniteMonoid sub(out.atoms, caps_, basis_);
        sub.dfs_all(x, out.items);
        return out;
    }

    /// Every multiplicity certificate for x over the generator list (not
    /// just over atoms), in lex order. Complete under the caps.
    std::vector<Cert> representations(const Rat& x) {
        std::vector<Cert> out;
        if (x < 0) return out;
        if (x == 0) {
            out.push_back({});
            return out;
        }
        dfs_all(x, out);
        return out;
    }

    /// Common divisors inside the monoid of a nonempty member list,
    /// ascending. Requires the small-DP route.
    std::vector<Rat> common_divisors(const std::vector<Rat>& xs) {
        return cd_impl(xs).first;
    }

    /// Maximal common divisors: d in CD with no d2 in CD, d2 - d a nonzero
    /// monoid element.
    std::vector<Rat> mcds(const std::vector<Rat>& xs) {
        auto [cd, reach] = cd_impl(xs);
        std::vector<Rat> out;
        for (const auto& d : cd) {
            bool maximal = true;
            for (const auto& d2 : cd) {
                if (d2 <= d) continue;
                const Rat diff = (d2 - d) * Rat(L_);
                if (reach[num(diff).convert_to<std::uint64_t>()]) {
                    maximal = false;
                    break;
                }
            }
            if (maximal) out.push_back(d);
        }
        return out;
    }

private:
    using Factors = std::vector<std::pair<Int, long>>;

    Factors factor(Int n) const {
        Factors out;
        auto strip = [&](const Int& p) {
            long e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            if (e > 0) out.emplace_back(p, e);
        };
        for (const auto& p : basis_)
            if (n > 1) strip(p);
        if (n > 1) strip(Int(2));
        for (Int p = 3; n > 1 && p * p <= n && p <= Int(caps_.trial_division_bound); p += 2)
            strip(p);
        if (n > 1) {
            if (!is_prime(n))
                throw CapExceeded("FiniteMonoid: denominator outside trial division bound");
            out.emplace_back(n, 1);
        }
        return out;
    }

    NumericalMonoid& nm() {
        if (!nm_) {
            std::vector<Int> sorted;
            for (auto j : perm_) sorted.push_back(w_[j]);
            nm_.emplace(std::move(sorted), caps_.nm);
        }
        return *nm_;
    }

    Cert from_sorted(const std::vector<Int>& mults) const {
        Cert c;
        for (std::size_t k = 0; k < mults.size(); ++k)
            if (mults[k] > 0) c[perm_[k]] = mults[k];
        return c;
    }

    // ---- forced-residue search ----------------------------------------

    struct DfsFrame {
        std::size_t idx;                       // generator index (caller order)
        std::optional<std::pair<Int, Int>> pin;  // (prime power q = p^e, carried data)
        Int q;                                 // modulus p^e, 1 when unpinned
        Int p;                                 // pinning prime, 0 when unpinned
        long e = 0;
        Rat unit;                              // p^e * w / u for g = u / (p^e w)
    };

    /// Order: positions of gens to process; suffix[i] maps prime -> max
    /// denominator exponent among order[i..]. A prime carried only at level
    /// i forces the multiplicity there modulo p^e.
    struct DfsPlan {
        std::vector<std::size_t> order;
        std::vector<std::map<Int, long>> suffix;
        std::vector<DfsFrame> frames;
    };

    DfsPlan plan(bool ascending) const {
        DfsPlan pl;
        pl.order = perm_;
        if (!ascending) std::reverse(pl.order.begin(), pl.order.end());
        const std::size_t n = pl.order.size();
        pl.suffix.assign(n + 1, {});
        for (std::size_t i = n; i-- > 0;) {
            pl.suffix[i] = pl.suffix[i + 1];
            for (const auto& [p, e] : den_factors_[pl.order[i]]) {
                auto it = pl.suffix[i].find(p);
                if (it == pl.suffix[i].end() || it->second < e) pl.suffix[i][p] = e;
            }
        }
        pl.frames.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            DfsFrame f;
            f.idx = pl.order[i];
            f.q = 1;
            f.p = 0;
            // strongest unique-carrier pin: the largest p^e carried only here
            for (const auto& [p, e] : den_factors_[f.idx]) {
                if (pl.suffix[i + 1].count(p)) continue;
                Int q = 1;
                for (long t = 0; t < e; ++t) q *= p;
                if (q > f.q) {
                    f.q = q;
                    f.p = p;
                    f.e = e;
                }
            }
            if (f.p != 0) {
                const Rat g = gens_[f.idx];
                const Int w = den(g) / f.q;
                f.unit = Rat(f.q) * Rat(w) / Rat(num(g));
            }
            pl.frames[i] = f;
        }
        return pl;
    }

    /// Residue r with multiplicity == r (mod q) forced at this frame, or
    /// nullopt when the remainder already violates the valuation bound.
    std::optional<Int> forced_residue(const DfsFrame& f, const Rat& rem) const {
        const Rat z = rem * f.unit;
        if (multiplicity(den(z), f.p) > 0) return std::nullopt;
        const Int r = (num(z) % f.q * mod_inverse(den(z) % f.q, f.q)) % f.q;
        return r < 0 ? r + f.q : r;
    }

    bool coverage_ok(const Rat& rem, const std::map<Int, long>& suffix) const {
        for (const auto& [p, e_max] : prime_set_) {
            const long d = multiplicity(den(rem), p);
            if (d == 0) continue;
            auto it = suffix.find(p);
            if (it == suffix.end() || it->second < d) return false;
        }
        return true;
    }

    MemberResult dfs_first(const Rat& x) {
        DfsPlan pl = plan(false);  // descending values, descending multiplicities
        Cert cert;
        std::uint64_t budget = caps_.nm.dfs_node_cap;
        if (dfs_rec(pl, 0, x, cert, budget, nullptr)) return {true, cert, ""};
        return {false, {}, "exhausted"};
    }

    void dfs_all(const Rat& x, std::vector<Cert>& out) {
        DfsPlan pl = plan(true);  // ascending atoms, ascending multiplicities -> lex
        Cert cert;
        std::uint64_t budget = caps_.nm.dfs_node_cap;
        dfs_rec(pl, 0, x, cert, budget, &out);
    }

    /// Returns true as soon as a certificate is found when out == nullptr;
    /// otherwise collects every leaf into *out (lex order by construction).
    bool dfs_rec(const DfsPlan& pl, std::size_t i, const Rat& rem, Cert& cert,
                 std::uint64_t& budget, std::vector<Cert>* out) {
        if (rem == 0) {
            if (!out) return true;
            if (out->size() >= caps_.enum_leaf_cap)
                throw CapExceeded("factorization enumeration cap exceeded");
            // remaining multiplicities are zero; record the current stack
            out->push_back(cert);
            return false;
        }
        if (i == pl.order.size()) return false;
        const DfsFrame& f = pl.frames[i];
        const Rat g = gens_[f.idx];
        const Int cmax = floor_rat(rem / g);
        Int lo = 0, step = 1;
        if (f.p != 0) {
            auto r = forced_residue(f, rem);
            if (!r) return false;
            lo = *r;
            step = f.q;
            if (lo > cmax) return false;
        }
        const Int count = (cmax - lo) / step;
        const bool ascending = out != nullptr;
        for (Int k = 0; k <= count; ++k) {
            if (budget-- == 0) throw CapExceeded("forced search node cap exceeded");
            const Int c = ascending ? Int(lo + k * step) : Int(lo + (count - k) * step);
            const Rat rest = rem - Rat(c) * g;
            if (rest != 0 && !coverage_ok(rest, pl.suffix[i + 1])) continue;
            if (c > 0) cert[f.idx] = c;
            if (dfs_rec(pl, i + 1, rest, cert, budget, out)) return true;
            cert.erase(f.idx);
        }
        return false;
    }

    // ---- common divisors ----------------------------------------------

    std::pair<std::vector<Rat>, std::vector<char>> cd_impl(const std::vector<Rat>& xs) {
        if (xs.empty()) throw DomainError("common_divisors: empty input");
        std::vector<Int> targets;
        for (const auto& x : xs) {
            auto r = member(x);
            if (!r.member) throw DomainError("common_divisors: input outside the monoid");
            targets.push_back(num(x * Rat(L_)));
        }
        const Int maxT = *std::max_element(targets.begin(), targets.end());
        const Int minT = *std::min_element(targets.begin(), targets.end());
        if (maxT > Int(caps_.nm.dp_cap))
            throw CapExceeded("common_divisors: scaled targets exceed dp cap");
        const auto M = maxT.convert_to<std::uint64_t>();
        std::vector<char> reach(M + 1, 0);
        reach[0] = 1;
        std::vector<std::uint64_t> w64;
        for (const auto& w : w_)
            if (w <= maxT) w64.push_back(w.convert_to<std::uint64_t>());
        std::sort(w64.begin(), w64.end());
        for (std::uint64_t v = 1; v <= M; ++v)
            for (auto w : w64) {
                if (w > v) break;
                if (reach[v - w]) {
                    reach[v] = 1;
                    break;
                }
            }
        std::vector<Rat> cd;
        const auto m = minT.convert_to<std::uint64_t>();
        for (std::uint64_t d = 0; d <= m; ++d) {
            if (!reach[d]) continue;
            bool all = true;
            for (const auto& t : targets)
                if (!reach[t.convert_to<std::uint64_t>() - d]) {
                    all = false;
                    break;
                }
            if (all) cd.push_back(Rat(Int(d)) / Rat(L_));
        }
        return {cd, reach};
    }

    std::vector<Rat> gens_;
    Caps caps_;
    std::vector<Int> basis_;
    Int L_;
    std::vector<Int> w_;
    std::vector<std::size_t> perm_;  // ascending value order
    std::vector<Factors> den_factors_;
    std::map<Int, long> prime_set_;
    bool fits64_ = false;
    std::optional<NumericalMonoid> nm_;
};

// ---- free-function layer over FiniteMonoid ----------------------------

inline MemberResult member_finite(const std::vector<Rat>& gens, const Rat& x, Caps caps = {}) {
    return FiniteMonoid(gens, caps).member(x);
}

inline std::optional<Cert> divides(const std::vector<Rat>& gens, const Rat& b, const Rat& c,
                                   Caps caps = {}) {
    return FiniteMonoid(gens, caps).divides(b, c);
}

inline std::vector<Rat> atoms_finite(const std::vector<Rat>& gens, Caps caps = {}) {
    return FiniteMonoid(gens, caps).atoms();
}

inline FiniteMonoid::Factorizations factorizations(const std::vector<Rat>& gens, const Rat& x,
                                                   Caps caps = {}) {
    return FiniteMonoid(gens, caps).factorizations(x);
}

inline std::vector<Rat> common_divisors(const std::vector<Rat>& gens,
                                        const std::vector<Rat>& xs, Caps caps = {}) {
    return FiniteMonoid(gens, caps).common_divisors(xs);
}

inline std::vector<Rat> mcds(const std::vector<Rat>& gens, const std::vector<Rat>& xs,
                             Caps caps = {}) {
    return FiniteMonoid(gens, caps).mcds(xs);
}

/// Common divisors of xs in the finitely generated monoid, falling back to
/// certificate enumeration when the scaled DP table would be too large:
/// d divides x inside <G> exactly when d is the value of a sub-multiset of
/// some representation of x over G.
inline std::vector<Rat> common_divisors_robust(FiniteMonoid& fm, const std::vector<Rat>& xs,
                                               std::uint64_t combo_cap = 2'000'000) {
    try {
        return fm.common_divisors(xs);
    } catch (const CapExceeded&) {
    }
    if (xs.empty()) throw DomainError("common_divisors_robust: empty input");
    std::optional<std::set<Rat>> acc;
    for (const auto& x : xs) {
        const auto reps = fm.representations(x);
        if (reps.empty()) throw DomainError("common_divisors_robust: input outside the monoid");
        std::set<Rat> vals;
        std::uint64_t combos = 0;
        for (const auto& cert : reps) {
            std::vector<std::pair<std::size_t, Int>> entries(cert.begin(), cert.end());
            std::function<void(std::size_t, const Rat&)> rec = [&](std::size_t i, const Rat& v) {
                if (++combos > combo_cap)
                    throw CapExceeded("common_divisors_robust: combination cap exceeded");
                if (i == entries.size()) {
                    vals.insert(v);
                    return;
                }
                const auto& [gi, mult] = entries[i];
                for (Int c = 0; c <= mult; ++c) rec(i + 1, v + Rat(c) * fm.gens()[gi]);
            };
            rec(0, Rat(0));
        }
        if (!acc) {
            acc = std::move(vals);
        } else {
            std::set<Rat> keep;
            for (const auto& v : *acc)
                if (vals.count(v)) keep.insert(v);
            *acc = std::move(keep);
        }
    }
    return {acc->begin(), acc->end()};
}

/// Maximal common divisors derived from common_divisors_robust: d is
/// maximal when no other common divisor exceeds it by a monoid element.
inline std::vector<Rat> mcds_robust(FiniteMonoid& fm, const std::vector<Rat>& xs,
                                    std::uint64_t combo_cap = 2'000'000) {
    const auto cd = common_divisors_robust(fm, xs, combo_cap);
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
}

/// Generator source: an explicit finite list or a memoized stream. Copies
/// share the memo; stream extension is synchronized.
class MonoidSpec {
public:
    static MonoidSpec finite(std::vector<Rat> gens, std::string label) {
        MonoidSpec s;
        s.finite_ = true;
        s.label_ = std::move(label);
        std::sort(gens.begin(), gens.end());
        if (std::adjacent_find(gens.begin(), gens.end()) != gens.end())
            throw DomainError("MonoidSpec: duplicate generators");
        for (const auto& g : gens)
            if (g <= 0) throw DomainError("MonoidSpec: generators must be positive");
        s.st_ = std::make_shared<State>();
        s.st_->memo = std::move(gens);
        return s;
    }

    static MonoidSpec stream(std::function<Rat(std::size_t)> fn, std::string label) {
        MonoidSpec s;
        s.finite_ = false;
        s.label_ = std::move(label);
        s.st_ = std::make_shared<State>();
        s.st_->fn = std::move(fn);
        return s;
    }

    bool is_finite() const { return finite_; }
    const std::string& label() const { return label_; }

    std::size_t finite_size() const {
        if (!finite_) throw DomainError("MonoidSpec: stream has no finite size");
        return st_->memo.size();
    }

    Rat generator(std::size_t i) const {
        if (finite_) {
            if (i >= st_->memo.size()) throw DomainError("MonoidSpec: index out of range");
            return st_->memo[i];
        }
        std::lock_guard<std::mutex> lk(st_->mu);
        while (st_->memo.size() <= i) {
            Rat g = st_->fn(st_->memo.size());
            if (g <= 0) throw DomainError("MonoidSpec: stream produced a nonpositive value");
            st_->memo.push_back(std::move(g));
        }
        return st_->memo[i];
    }

    /// First `depth` generators in stream order (the full list for finite
    /// specs when depth exceeds their size).
    std::vector<Rat> truncation(std::size_t depth) const {
        const std::size_t n = finite_ ? std::min(depth, st_->memo.size()) : depth;
        std::vector<Rat> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(generator(i));
        return out;
    }

private:
    struct State {
        std::mutex mu;
        std::vector<Rat> memo;
        std::function<Rat(std::size_t)> fn;
    };
    MonoidSpec() = default;
    bool finite_ = true;
    std::string label_;
    std::shared_ptr<State> st_;
};

}  // namespace puilift
