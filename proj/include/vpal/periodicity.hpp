#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "vpal/digits.hpp"
#include "vpal/factor.hpp"

namespace vpal {

enum class Tri : std::uint8_t { zero = 0, one = 1, unknown = 2 };

// I(k) for k = 1..window: whether the k-fold digit concatenation of n is a
// v-palindrome in the given base. Defined only for b not dividing n and
// n not its own reversal.
struct IndicatorSeries {
    mpz_class n;
    Base base = 10;
    std::vector<Tri> values;  // values[i] holds I(i + 1)

    std::size_t window() const { return values.size(); }
    Tri at(std::uint64_t k) const;  // 1-based
    std::size_t unknown_count() const;

    bool operator==(const IndicatorSeries&) const = default;
};

struct DecompositionTerm {
    std::uint64_t modulus = 1;      // the divisor a of I_a
    std::int64_t coefficient = 0;   // its nonzero integer weight

    bool operator==(const DecompositionTerm&) const = default;
};

// The unique expression of the series as an integer combination of divisor
// indicators I_a. omega0 is the lcm of the moduli (1 when empty); c is the
// smallest modulus, or absent when no concatenation ever hits.
struct PeriodicDecomposition {
    std::vector<DecompositionTerm> terms;  // moduli strictly increasing
    std::uint64_t omega0 = 1;
    std::optional<std::uint64_t> c;

    // Sum of coefficients over moduli dividing k.
    std::int64_t reconstruct(std::uint64_t k) const;

    bool operator==(const PeriodicDecomposition&) const = default;
};

// Moebius function of m >= 1.
int mobius(std::uint64_t m);

// Membership verdict for the k-fold concatenation n(k)_b. Exploits the
// block structure: n(k)_b factors as n times a product of cyclotomic
// values Phi_d(b), so each piece is factored separately, keeping the work
// bounded even for concatenations of hundreds of digits.
Tri indicator(const mpz_class& n, Base b, std::uint64_t k, const EffortBudget& budget = {},
              FactorCache* cache = nullptr);

IndicatorSeries compute_series(const mpz_class& n, Base b, std::size_t window,
                               const EffortBudget& budget = {}, FactorCache* cache = nullptr);

// Smallest omega <= window/2 with values(k) = values(k + omega) throughout
// the window, certified to depend only on gcd(k, omega). The result is an
// empirical candidate for the smallest period, valid on the window.
// Throws NoPeriodFound or GcdInconsistency.
std::uint64_t detect_period(const IndicatorSeries& series);

// Unique decomposition over the divisor lattice of omega by Moebius
// inversion: with F(d) the series value at any k with gcd(k, omega) = d,
// the weight at d is sum over e | d of mu(d/e) * F(e); zero weights drop.
PeriodicDecomposition decompose(const IndicatorSeries& series, std::uint64_t omega);

struct PeriodAnalysis {
    IndicatorSeries series;
    std::uint64_t omega = 1;  // detected candidate period (window-certified)
    PeriodicDecomposition decomposition;
};

// compute_series + detect_period + decompose. When no period fits the
// window, the window doubles up to the cap (96 by default, or the initial
// window if larger) before NoPeriodFound propagates. The reported omega0 is
// window-certified, not proven.
PeriodAnalysis analyze(const mpz_class& n, Base b, std::size_t window = 24,
                       const EffortBudget& budget = {}, FactorCache* cache = nullptr);

// The first `count` concatenations n(1 + j*omega)_b, each verified to be a
// v-palindrome. Requires n itself to be one. A failed verification throws
// WitnessVerificationFailed (the candidate omega was wrong).
std::vector<mpz_class> infinitude_witnesses(const mpz_class& n, Base b, std::size_t count,
                                            const EffortBudget& budget = {},
                                            FactorCache* cache = nullptr,
                                            std::size_t window = 24);

// Exact value of the d-th cyclotomic polynomial at integer argument x >= 2.
mpz_class cyclotomic_value(std::uint64_t d, const mpz_class& x);

}  // namespace vpal
