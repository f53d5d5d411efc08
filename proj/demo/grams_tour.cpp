// Tour of the lifting machinery on the classic halving construction: the
// base monoid is generated by 1/2^n, the lifting assigns the n-th odd prime
// p_n to each generator, and the lifted monoid is generated by 1/(2^n p_n).
// It is atomic, satisfies the ascending chain condition on principal
// ideals, and every element factors uniquely.

#include <puilift/puilift.hpp>

#include <iostream>

using namespace puilift;

int main() {
    const std::size_t depth = 8;
    LiftedMonoid M = build_grams(depth);

    std::cout << "generators (atoms) of the depth-" << depth << " truncation:\n";
    for (const Rat& g : M.truncation(depth)) std::cout << "  " << rat_to_string(g) << "\n";

    const auto atoms = atoms_finite(M.truncation(depth));
    std::cout << "\natoms_finite confirms " << atoms.size() << " atoms, none splits.\n";

    // Decoding 5/208 = 5 * (1/208) finds the piece part; decoding 1/16 =
    // 13 * (1/208) folds the full p_4 = 13 copies back into the base.
    for (const Rat& x : {Rat(5, 208), Rat(1, 16)}) {
        const auto dec = M.decode(x, depth + 6);
        std::cout << "\ndecode(" << rat_to_string(x) << "): x0 = "
                  << rat_to_string(dec.decomposition->x0) << "\n";
        for (const auto& [idx, n] : dec.decomposition->part_n)
            std::cout << "  piece at base index " << idx << " with n = " << n << " (value "
                      << rat_to_string(dec.decomposition->parts.at(idx)) << ")\n";
    }

    // The principal ideals (1/2^n + M) ascend strictly and never stabilize:
    // consecutive differences are again members, so each ideal contains the
    // previous one properly. Extending the chain one step per depth shows
    // the ascent continuing as far as the truncation reaches.
    std::vector<Rat> chain;
    for (std::size_t n = 1; n <= depth; ++n) chain.push_back(Rat(1, pow2(static_cast<long>(n))));
    const auto probe = M.accp_chain_probe(Rat(1), chain, depth + 6);
    std::cout << "\nascending chain from 1: " << probe.steps_certified
              << " certified steps, status " << probe.status << "\n";
    for (const auto& st : probe.steps)
        std::cout << "  " << rat_to_string(st.from) << " -> " << rat_to_string(st.to)
                  << "  (difference " << rat_to_string(st.diff) << " is a member)\n";

    // Unique factorization in action: the same element rewritten two ways
    // canonicalizes identically.
    Cert a, b;
    a[0] = 3;                 // 3 copies of 1/3
    b[1] = 10;                // 10 copies of 1/10
    const auto da = M.canonical_decomposition(a);
    const auto db = M.canonical_decomposition(b);
    std::cout << "\n3 * (1/3) and 10 * (1/10) both canonicalize to x0 = "
              << rat_to_string(da.x0) << " and agree: "
              << (da.value == db.value && da.x0 == db.x0 && da.parts == db.parts ? "yes" : "no")
              << "\n";
    return 0;
}
