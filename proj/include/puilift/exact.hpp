#pragma once

/// Exact rational arithmetic, p-adic valuations, and certified primality.
///
/// Everything downstream (monoid membership, lifting tables, polynomial
/// exponents) runs on these types; no floating point anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace puilift {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Loud failure for any guarded scan or table that would exceed its cap.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition violation on a stated operation domain.
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

inline Int num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int den(const Rat& q) { return boost::multiprecision::denominator(q); }

/// (n, d) with gcd(n, d) = 1 and d >= 1; the backing type keeps this canonical.
inline std::pair<Int, Int> num_den(const Rat& q) { return {num(q), den(q)}; }

inline Rat make_rat(const Int& n, const Int& d) {
    if (d == 0) throw DomainError("make_rat: zero denominator");
    return d < 0 ? Rat(-n, -d) : Rat(n, d);
}

/// Canonical "n/d" form, denominator always explicit ("0/1", "5/1").
inline std::string rat_to_string(const Rat& q) {
    return num(q).str() + "/" + den(q).str();
}

inline std::string int_to_string(const Int& n) { return n.str(); }

/// Accepts "n" or "n/d" with optional leading '-'; rejects anything else.
inline Rat parse_rat(const std::string& text) {
    const auto bad = [&] { throw DomainError("parse_rat: malformed rational '" + text + "'"); };
    if (text.empty()) bad();
    const auto slash = text.find('/');
    const auto digits_ok = [&](std::size_t from, std::size_t to) {
        if (from >= to) return false;
        if (text[from] == '-') ++from;
        if (from >= to) return false;
        for (std::size_t i = from; i < to; ++i)
            if (text[i] < '0' || text[i] > '9') return false;
        return true;
    };
    try {
        if (slash == std::string::npos) {
            if (!digits_ok(0, text.size())) bad();
            return Rat(Int(text));
        }
        if (!digits_ok(0, slash) || !digits_ok(slash + 1, text.size())) bad();
        Int n(text.substr(0, slash));
        Int d(text.substr(slash + 1));
        return make_rat(n, d);
    } catch (const std::exception&) {
        bad();
    }
    return Rat(0);  // unreachable
}

/// floor(q) as an integer (toward minus infinity).
inline Int floor_rat(const Rat& q) {
    Int n = num(q), d = den(q);
    Int quo = n / d;
    if (n < 0 && quo * d != n) --quo;
    return quo;
}

inline Int ceil_rat(const Rat& q) {
    Int n = num(q), d = den(q);
    Int quo = n / d;
    if (n > 0 && quo * d != n) ++quo;
    return quo;
}

/// Multiplicity of p in a nonzero integer n (number of times p divides n).
inline long multiplicity(Int n, const Int& p) {
    if (n == 0) throw DomainError("multiplicity: zero argument");
    if (p < 2) throw DomainError("multiplicity: base < 2");
    if (n < 0) n = -n;
    long m = 0;
    while (n % p == 0) {
        n /= p;
        ++m;
    }
    return m;
}

namespace detail {

// Deterministic Miller-Rabin witness set, valid for all n < 3.317e24.
inline const Int& mr_validity_bound() {
    static const Int bound("3317044064679887385961981");
    return bound;
}

inline bool mr_witness(const Int& a, const Int& d, long r, const Int& n) {
    Int x = boost::multiprecision::powm(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (long i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;  // a witnesses compositeness
}

}  // namespace detail

/// Deterministic primality for 0 <= n < 3.317e24; larger inputs are rejected.
inline bool is_prime(const Int& n) {
    if (n >= detail::mr_validity_bound())
        throw DomainError("is_prime: input beyond deterministic witness bound");
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    long r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
        if (detail::mr_witness(Int(a), d, r, n)) return false;
    return true;
}

/// A certified prime; construction re-checks primality.
struct Prime {
    Int value;
    explicit Prime(Int v) : value(std::move(v)) {
        if (!is_prime(value)) throw DomainError("Prime: " + value.str() + " is not prime");
    }
    friend bool operator==(const Prime& a, const Prime& b) { return a.value == b.value; }
    friend bool operator<(const Prime& a, const Prime& b) { return a.value < b.value; }
};

/// p-adic valuation of a nonzero rational. p must be prime.
inline long p_adic_valuation(const Rat& q, const Int& p) {
    if (q == 0) throw DomainError("p_adic_valuation: zero argument");
    if (!is_prime(p)) throw DomainError("p_adic_valuation: modulus not prime");
    const auto [n, d] = num_den(q);
    long vn = (n % p == 0 || -n % p == 0) ? multiplicity(n, p) : 0;
    long vd = (d % p == 0) ? multiplicity(d, p) : 0;
    return vn - vd;
}

inline long p_adic_valuation(const Rat& q, const Prime& p) {
    if (q == 0) throw DomainError("p_adic_valuation: zero argument");
    const auto [n, d] = num_den(q);
    long vn = (n % p.value == 0) ? multiplicity(n, p.value) : 0;
    long vd = (d % p.value == 0) ? multiplicity(d, p.value) : 0;
    return vn - vd;
}

/// Smallest prime p > start with pred(p); scans at most `cap` candidates.
inline Int next_prime_satisfying(const Int& start,
                                 const std::function<bool(const Int&)>& pred,
                                 std::uint64_t cap = 10'000'000) {
    Int c = start < 1 ? Int(1) : start;
    for (std::uint64_t steps = 0; steps <= cap; ++steps) {
        ++c;
        if (is_prime(c) && (!pred || pred(c))) return c;
    }
    throw CapExceeded("next_prime_satisfying: scan cap " + std::to_string(cap) +
                      " exceeded from " + start.str());
}

inline Int next_prime(const Int& start, std::uint64_t cap = 10'000'000) {
    return next_prime_satisfying(start, nullptr, cap);
}

/// True when n = 2^k for some k >= 0.
inline bool is_power_of_two(const Int& n) {
    if (n < 1) return false;
    Int m = n;
    while (m % 2 == 0) m /= 2;
    return m == 1;
}

inline Int pow2(long k) {
    Int r = 1;
    return r << k;
}

/// modular inverse of a mod m for coprime a, m >= 1
inline Int mod_inverse(Int a, const Int& m) {
    if (m < 1) throw DomainError("mod_inverse: modulus < 1");
    Int t = 0, newt = 1, r = m, newr = ((a % m) + m) % m;
    while (newr != 0) {
        Int q = r / newr;
        Int tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (r > 1) throw DomainError("mod_inverse: arguments not coprime");
    if (t < 0) t += m;
    return t;
}

}  // namespace puilift
