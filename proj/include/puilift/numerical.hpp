#pragma once

/// Membership engine for numerical monoids <w_1, ..., w_k> (positive
/// integers, strictly increasing). Three exact routes, chosen by input size:
/// closed forms for k <= 2, a reachability DP for small targets, and an
/// Apery-set shortest-path table mod w_1 for large targets with small w_1.
/// Exceeding every route's cap is a loud error, never a silent answer.

#include "exact.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace puilift {

struct NmCaps {
    std::uint64_t dp_cap = 20'000'000;     // max DP table size (entries)
    std::uint64_t apery_cap = 8'000'000;   // max residue classes for the Apery table
    std::uint64_t dfs_node_cap = 300'000;  // budget for the rational forced search
};

class NumericalMonoid {
public:
    explicit NumericalMonoid(std::vector<Int> gens, NmCaps caps = {})
        : g_(std::move(gens)), caps_(caps) {
        if (g_.empty()) throw DomainError("NumericalMonoid: empty generator list");
        for (std::size_t i = 0; i < g_.size(); ++i) {
            if (g_[i] <= 0) throw DomainError("NumericalMonoid: nonpositive generator");
            if (i > 0 && g_[i] <= g_[i - 1])
                throw DomainError("NumericalMonoid: generators must be strictly increasing");
        }
        fits64_ = g_.back() <= Int(std::numeric_limits<std::uint64_t>::max() / 2);
        if (fits64_)
            for (const auto& v : g_) w_.push_back(v.convert_to<std::uint64_t>());
    }

    const std::vector<Int>& gens() const { return g_; }

    /// Whether the integer routes (DP / Apery) can run at all.
    bool fits64() const { return fits64_; }

    /// Multiplicity vector c with sum c_i * w_i = t, or nullopt for certified
    /// non-membership. Certificates prefer the largest generator index at
    /// every backtracking step.
    std::optional<std::vector<Int>> member(const Int& t) {
        if (t < 0) return std::nullopt;
        std::vector<Int> cert(g_.size(), Int(0));
        if (t == 0) return cert;
        if (g_.size() == 1) {
            if (t % g_[0] != 0) return std::nullopt;
            cert[0] = t / g_[0];
            return cert;
        }
        if (g_.size() == 2) return member_two_gen(t);
        if (!fits64_ || t > Int(std::numeric_limits<std::uint64_t>::max() / 2))
            throw CapExceeded("NumericalMonoid: target too large for any route");
        const std::uint64_t T = t.convert_to<std::uint64_t>();
        if (T <= caps_.dp_cap) {
            ensure_dp(T);
            if (!dp_[T]) return std::nullopt;
            return backtrack(T, [&](std::uint64_t v) { return bool(dp_[v]); });
        }
        if (w_[0] <= caps_.apery_cap) {
            ensure_apery();
            if (T < apery_[T % w_[0]]) return std::nullopt;
            return backtrack(T, [&](std::uint64_t v) { return v >= apery_[v % w_[0]]; });
        }
        throw CapExceeded("NumericalMonoid: dp cap and apery cap both exceeded");
    }

    /// Indexes j such that g_j is not a sum of two nonzero monoid elements,
    /// i.e. the minimal generating set (the atoms).
    std::vector<std::size_t> minimal_generator_indexes() {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < g_.size(); ++j) {
            bool minimal = true;
            for (std::size_t i = 0; i < g_.size() && minimal; ++i) {
                const Int diff = g_[j] - g_[i];
                if (diff > 0 && member(diff)) minimal = false;
            }
            if (minimal) out.push_back(j);
        }
        return out;
    }

private:
    std::optional<std::vector<Int>> member_two_gen(const Int& t) const {
        const Int G = boost::multiprecision::gcd(g_[0], g_[1]);
        if (t % G != 0) return std::nullopt;
        const Int a = g_[0] / G, b = g_[1] / G, tp = t / G;
        // beta = multiplicity of the larger generator, maximized
        const Int beta0 = a == 1 ? Int(0) : (tp % a) * mod_inverse(b % a, a) % a;
        if (beta0 * b > tp) return std::nullopt;
        const Int beta = beta0 + ((tp - beta0 * b) / (a * b)) * a;
        std::vector<Int> cert(2);
        cert[0] = (tp - beta * b) / a;
        cert[1] = beta;
        return cert;
    }

    void ensure_dp(std::uint64_t T) {
        if (dp_.size() > T) return;
        dp_.assign(static_cast<std::size_t>(T) + 1, 0);
        dp_[0] = 1;
        for (std::uint64_t v = 1; v <= T; ++v)
            for (std::size_t i = 0; i < w_.size(); ++i)
                if (w_[i] <= v && dp_[v - w_[i]]) {
                    dp_[v] = 1;
                    break;
                }
    }

    void ensure_apery() {
        if (!apery_.empty()) return;
        const std::uint64_t m = w_[0];
        constexpr std::uint64_t INF = std::numeric_limits<std::uint64_t>::max();
        apery_.assign(m, INF);
        apery_[0] = 0;
        using Node = std::pair<std::uint64_t, std::uint64_t>;  // (dist, residue)
        std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
        pq.push({0, 0});
        while (!pq.empty()) {
            const auto [d, r] = pq.top();
            pq.pop();
            if (d != apery_[r]) continue;
            for (std::size_t i = 1; i < w_.size(); ++i) {
                const std::uint64_t nd = d + w_[i];
                const std::uint64_t nr = nd % m;
                if (nd < apery_[nr]) {
                    apery_[nr] = nd;
                    pq.push({nd, nr});
                }
            }
        }
    }

    template <class Reach>
    std::vector<Int> backtrack(std::uint64_t T, Reach reach) const {
        std::vector<Int> cert(g_.size(), Int(0));
        std::uint64_t v = T;
        while (v > 0) {
            bool advanced = false;
            for (std::size_t i = g_.size(); i-- > 0;) {
                if (w_[i] <= v && reach(v - w_[i])) {
                    ++cert[i];
                    v -= w_[i];
                    advanced = true;
                    break;
                }
            }
            if (!advanced) throw std::logic_error("NumericalMonoid: backtrack stuck");
        }
        return cert;
    }

    std::vector<Int> g_;
    NmCaps caps_;
    bool fits64_ = false;
    std::vector<std::uint64_t> w_;
    std::vector<char> dp_;
    std::vector<std::uint64_t> apery_;
};

}  // namespace puilift
