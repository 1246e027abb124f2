#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vpal/digits.hpp"
#include "vpal/factor.hpp"

namespace vpal {

enum class Verdict { yes, no, unknown };

// The membership conditions, in the order they are checked.
enum class Condition { none, divisible_by_base, equals_own_reversal, v_mismatch };

std::string to_string(Verdict v);
std::string to_string(Condition c);

// Full diagnostic record for one membership question.
struct VPalindromeReport {
    mpz_class n;
    Base base = 10;
    mpz_class reversal;
    std::optional<mpz_class> v_n;         // empty = factorization incomplete
    std::optional<mpz_class> v_reversal;  // empty = factorization incomplete
    Verdict verdict = Verdict::no;
    Condition failed = Condition::none;

    bool operator==(const VPalindromeReport&) const = default;
};

// v(n): over the prime factorization, each exponent-1 prime contributes
// itself and each p^e with e >= 2 contributes p + e; v(1) = 0. Empty when
// the factorization could not be completed under the budget.
std::optional<mpz_class> v_of(const mpz_class& n, const EffortBudget& budget = {},
                              FactorCache* cache = nullptr);

// Same sum evaluated on an already complete factorization.
mpz_class v_of_factors(const Factorization& f);

// Checks conditions in order: b | n, n = r_b(n), v(n) != v(r_b(n)).
// Factorizations are only attempted once the first two conditions pass.
VPalindromeReport is_v_palindrome(const mpz_class& n, Base b, const EffortBudget& budget = {},
                                  FactorCache* cache = nullptr);

// All members of V_b up to limit, ascending. The range may be partitioned
// across `workers` threads; the result is independent of the partitioning.
// Any unknown verdict in range throws UnknownVerdict naming the offender.
std::vector<std::uint64_t> enumerate_v_palindromes(Base b, std::uint64_t limit,
                                                   const EffortBudget& budget = {},
                                                   FactorCache* cache = nullptr,
                                                   unsigned workers = 1);

// min(V_b) by ascending scan. Throws SearchCapExceeded at the ceiling and
// UnknownVerdict if an undecidable n precedes the first member.
std::uint64_t min_v_palindrome(Base b, const EffortBudget& budget = {},
                               FactorCache* cache = nullptr,
                               std::uint64_t scan_cap = 10'000'000);

struct GapReport {
    std::uint64_t start = 1;
    std::uint64_t length = 0;

    bool operator==(const GapReport&) const = default;
};

// Leftmost longest run of consecutive non-members inside [1, limit].
GapReport longest_gap(Base b, std::uint64_t limit, const EffortBudget& budget = {},
                      FactorCache* cache = nullptr, unsigned workers = 1);

// 18*rho for a base-ten palindrome rho over digits {0,1} only.
// Verifies the instance and returns its report (expected verdict: yes).
VPalindromeReport family_18rho(const mpz_class& rho, const EffortBudget& budget = {},
                               FactorCache* cache = nullptr);

}  // namespace vpal
