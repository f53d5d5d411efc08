#pragma once

// Independent reference implementations used to freeze expected values.
// Deliberately naive: correctness by inspection, no shared logic with the
// library under test.

#include <puilift/exact.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

namespace oracles {

using puilift::Int;
using puilift::Rat;

inline bool trial_division_prime(const Int& n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline Int next_prime_by_trial(Int n) {
    do {
        ++n;
    } while (!trial_division_prime(n));
    return n;
}

// Exponent of p in n (n != 0), counted by repeated division.
inline long count_factor(Int n, const Int& p) {
    if (n < 0) n = -n;
    long e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline bool brute_member(const std::vector<Rat>& gens, const Rat& x) {
    if (x < 0) return false;
    std::function<bool(std::size_t, const Rat&)> rec = [&](std::size_t i, const Rat& rem) -> bool {
        if (rem == 0) return true;
        if (i == gens.size()) return false;
        for (Int c = 0; Rat(c) * gens[i] <= rem; ++c)
            if (rec(i + 1, rem - Rat(c) * gens[i])) return true;
        return false;
    };
    return rec(0, x);
}

inline std::vector<Rat> brute_atoms(const std::vector<Rat>& gens) {
    std::vector<Rat> out;
    for (const auto& g : gens) {
        bool atom = true;
        for (const auto& h : gens)
            if (h < g && brute_member(gens, g - h)) atom = false;
        if (atom) out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// All multiplicity vectors over `atoms` summing to x, sorted lexicographically.
inline std::vector<std::vector<Int>> brute_factorizations(const std::vector<Rat>& atoms,
                                                          const Rat& x) {
    std::vector<std::vector<Int>> out;
    std::vector<Int> cur(atoms.size(), Int(0));
    std::function<void(std::size_t, const Rat&)> rec = [&](std::size_t i, const Rat& rem) {
        if (i == atoms.size()) {
            if (rem == 0) out.push_back(cur);
            return;
        }
        for (Int c = 0; Rat(c) * atoms[i] <= rem; ++c) {
            cur[i] = c;
            rec(i + 1, rem - Rat(c) * atoms[i]);
        }
        cur[i] = 0;
    };
    if (x >= 0) rec(0, x);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<Rat> brute_common_divisors(const std::vector<Rat>& gens,
                                              const std::vector<Rat>& xs,
                                              const std::vector<Rat>& candidates) {
    std::vector<Rat> out;
    for (const auto& d : candidates) {
        bool ok = brute_member(gens, d);
        for (const auto& x : xs) ok = ok && brute_member(gens, x - d);
        if (ok) out.push_back(d);
    }
    return out;
}

}  // namespace oracles
