// Tour of the main construction from the algebra side: the binomial
// f = X^{b_1} + X^{c_1} factors as X^{a_2} ... X^{a_n} (X^{b_n} + X^{c_n})
// for every n, so f never reaches an irreducible factorization even though
// the exponent monoid is atomic. Alongside: the endless improvement chain
// of common divisors of {b_1, c_1}, and a certified irreducible divisor of
// a small polynomial.

#include <puilift/puilift.hpp>

#include <iostream>

using namespace puilift;

int main() {
    const CounterexampleParams P = build_default_params();
    std::cout << "b_1 = " << rat_to_string(P.b1()) << ", c_1 = " << rat_to_string(P.c1())
              << ", epsilon = " << rat_to_string(P.epsilon()) << "\n";
    std::cout << "the a_k shrink fast: a_2 = " << rat_to_string(P.a(2))
              << ", a_3 = " << rat_to_string(P.a(3)) << ", a_4 = " << rat_to_string(P.a(4))
              << "\n\n";

    for (const FieldSpec& F : {FieldSpec::rationals(), FieldSpec::prime_field(Int(5))}) {
        const auto rep = descent_chain(P, F, 8);
        std::cout << "descent over " << rep.field_label << " (status " << rep.status << "):\n";
        for (const auto& st : rep.steps)
            std::cout << "  n = " << st.n << ": f = X^(" << rat_to_string(st.prefix)
                      << ") * (X^b_" << st.n << " + X^c_" << st.n << ")"
                      << (st.cofactor_divisible ? ", cofactor divisible by X^a" : "") << "\n";
        std::cout << "\n";
    }

    std::cout << "common divisors of {b_1, c_1} improve forever:\n";
    Rat d(0);
    for (const auto& step : improvement_chain(P, 6)) {
        std::cout << "  " << rat_to_string(d) << " -> " << rat_to_string(step.divisor)
                  << "  (added a_" << step.a_index << ")\n";
        d = step.divisor;
    }

    // A certified irreducible divisor of a small polynomial over the same
    // exponent monoid.
    auto lifted = build_main_lifted(P, 24);
    const Domain dom = ExponentDomain::main_monoid(P);
    const FieldSpec Q = FieldSpec::rationals();
    const auto g = MonoidPolynomial::make(
        dom, Q, {{P.a(2), Rat(2)}, {P.a(2) + P.a(3), Rat(1)}});
    const auto fr = furstenberg_divisor(lifted, P, g, 8);
    std::cout << "\nirreducible divisor search on 2 X^(a_2) + X^(a_2 + a_3): status "
              << fr.status << ", rule " << fr.rule << "\n";
    for (const Term& t : fr.divisor.terms())
        std::cout << "  divisor term: " << rat_to_string(t.coef) << " X^("
                  << rat_to_string(t.exp) << ")\n";
    return 0;
}
