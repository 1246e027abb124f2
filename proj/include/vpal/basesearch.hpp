#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "vpal/digits.hpp"
#include "vpal/factor.hpp"
#include "vpal/vcore.hpp"

namespace vpal {

// A pair of integers m1 < m2 with v(m1) = v(m2); the engine behind the
// two-digit construction. The default pair is (5, 6).
struct ValuePair {
    std::uint32_t m1 = 5;
    std::uint32_t m2 = 6;

    bool operator==(const ValuePair&) const = default;
};

// Digits a < c < base and multiplier t with a*base + c = m1*t,
// c*base + a = m2*t, and t coprime to m1*m2. Witnesses the two-digit
// v-palindrome (a c)_base.
struct PermissibleTriple {
    mpz_class a;
    mpz_class c;
    mpz_class t;
    Base base = 2;
    ValuePair pair;

    mpz_class two_digit() const { return a * static_cast<unsigned long>(base) + c; }
    mpz_class reversed_two_digit() const { return c * static_cast<unsigned long>(base) + a; }

    bool operator==(const PermissibleTriple&) const = default;
};

struct TripleDiagnosis {
    bool ok = false;
    std::string violation;  // first violated clause, empty when ok

    explicit operator bool() const { return ok; }
};

// Checks every invariant; names the first violated clause. Total.
TripleDiagnosis verify_triple(const PermissibleTriple& triple);

// lcm of (b^2-1)/gcd(m1*b - m2, b^2-1) and (b^2-1)/gcd(m2*b - m1, b^2-1):
// exactly the multiples t making both digits integral. Divides b^2 - 1.
mpz_class pair_divisor_obstruction(Base b, ValuePair pair);

// The (5,6) instance, written f(b).
mpz_class f_of(Base b);

// Exclusive upper bound b*(b^2-1)/(m2*b - m1) keeping the larger digit
// below the base.
mpz_class multiplier_bound(Base b, ValuePair pair);

// All permissible triples for base b with the default pair (5, 6):
// one triple per t in S(b) = { t : gcd(t,30)=1, f(b) | t, t below the
// bound }. Pure arithmetic; may be empty.
std::vector<PermissibleTriple> permissible_triples(Base b);

// The general-pair search. Requires m1 < m2 and v(m1) = v(m2); results
// additionally need m1*b > m2 so the small digit is positive. Every triple
// returned passed verify_triple and had its two-digit number confirmed to
// be a v-palindrome.
std::vector<PermissibleTriple> pair_search(Base b, ValuePair pair,
                                           const EffortBudget& budget = {},
                                           FactorCache* cache = nullptr);

struct ConstructedWitness {
    PermissibleTriple triple;
    Base base = 2;
    VPalindromeReport report;  // membership report for the two-digit number

    bool operator==(const ConstructedWitness&) const = default;
};

// For k = 4 (mod 11): the triple ((150k-6)/11, (180k-5)/11, (900k^2-1)/11)
// for base 30k, verified end to end.
ConstructedWitness theorem_construct(std::uint64_t k, const EffortBudget& budget = {},
                                     FactorCache* cache = nullptr);

// Every base b <= max_b with b = 120 (mod 330), each with its constructed
// two-digit witness.
std::vector<ConstructedWitness> corollary_bases(Base max_b, const EffortBudget& budget = {},
                                                FactorCache* cache = nullptr);

// gcd(b^2 - 1, 30) = 1, cross-checked against the congruence
// characterization (b = 0 mod 6 and b mod 5 in {0, 2, 3}); a disagreement
// throws InternalInconsistency.
bool coprimality_classes(Base b);

}  // namespace vpal
