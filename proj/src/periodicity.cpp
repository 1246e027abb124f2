#include "vpal/periodicity.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "vpal/errors.hpp"
#include "vpal/vcore.hpp"

namespace vpal {
namespace {

constexpr std::size_t kWindowCap = 96;

std::vector<std::uint64_t> divisors_of(std::uint64_t x) {
    std::vector<std::uint64_t> divs;
    for (std::uint64_t i = 1; i * i <= x; ++i) {
        if (x % i != 0) continue;
        divs.push_back(i);
        if (i != x / i) divs.push_back(x / i);
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

void check_hypotheses(const mpz_class& n, Base b) {
    check_base(b);
    if (n < 1) throw PreconditionViolated("n must be a positive integer");
    if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(b))) {
        throw PreconditionViolated("indicator series requires b not dividing n");
    }
    if (n == reverse_digits(n, b)) {
        throw PreconditionViolated("indicator series requires n different from its reversal");
    }
}

// v of the k-fold concatenation of block, using the algebraic split
// block(k)_b = block * prod of Phi_d(b) over d | L*k with d not dividing L.
// Shared prime factors across pieces merge by exponent.
std::optional<mpz_class> concat_v(const mpz_class& block, std::uint64_t k, Base b,
                                  const EffortBudget& budget, FactorCache* cache) {
    const std::uint64_t block_len = digit_length(block, b);
    std::vector<Factorization> pieces;
    pieces.push_back(factorize(block, budget, cache));
    const mpz_class base_value(static_cast<unsigned long>(b));
    for (std::uint64_t d : divisors_of(block_len * k)) {
        if (block_len % d == 0) continue;
        pieces.push_back(factorize(cyclotomic_value(d, base_value), budget, cache));
    }

    std::map<mpz_class, std::uint64_t> exponents;
    for (const auto& piece : pieces) {
        if (!piece.complete()) return std::nullopt;
        for (const auto& term : piece.terms) exponents[term.prime] += term.exponent;
    }
    Factorization merged;
    for (const auto& [prime, exponent] : exponents) {
        merged.terms.push_back({prime, static_cast<std::uint32_t>(exponent)});
    }
    if (merged.product() != repeat_concat(block, k, b)) {
        throw InternalInconsistency("cyclotomic split does not multiply back to the concatenation");
    }
    return v_of_factors(merged);
}

}  // namespace

Tri IndicatorSeries::at(std::uint64_t k) const {
    if (k < 1 || k > values.size()) {
        throw PreconditionViolated("series index out of window");
    }
    return values[k - 1];
}

std::size_t IndicatorSeries::unknown_count() const {
    return static_cast<std::size_t>(
        std::count(values.begin(), values.end(), Tri::unknown));
}

std::int64_t PeriodicDecomposition::reconstruct(std::uint64_t k) const {
    std::int64_t sum = 0;
    for (const auto& term : terms) {
        if (k % term.modulus == 0) sum += term.coefficient;
    }
    return sum;
}

int mobius(std::uint64_t m) {
    if (m == 0) throw PreconditionViolated("mobius is defined on positive integers");
    int sign = 1;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        m /= p;
        if (m % p == 0) return 0;
        sign = -sign;
    }
    if (m > 1) sign = -sign;
    return sign;
}

mpz_class cyclotomic_value(std::uint64_t d, const mpz_class& x) {
    if (d == 0 || x < 2) throw PreconditionViolated("cyclotomic_value requires d >= 1 and x >= 2");
    mpz_class numerator(1), denominator(1), power;
    for (std::uint64_t e : divisors_of(d)) {
        const int mu = mobius(e);
        if (mu == 0) continue;
        mpz_pow_ui(power.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(d / e));
        power -= 1;
        (mu == 1 ? numerator : denominator) *= power;
    }
    mpz_class value;
    mpz_divexact(value.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
    return value;
}

Tri indicator(const mpz_class& n, Base b, std::uint64_t k, const EffortBudget& budget,
              FactorCache* cache) {
    check_hypotheses(n, b);
    if (k < 1) throw PreconditionViolated("k must be >= 1");

    // Conditions (i) and (ii) hold for every k under the hypotheses: the
    // concatenation ends in n's last digit, and its reversal is the
    // concatenation of the reversed block.
    const auto v_n = concat_v(n, k, b, budget, cache);
    if (!v_n) return Tri::unknown;
    const auto v_r = concat_v(reverse_digits(n, b), k, b, budget, cache);
    if (!v_r) return Tri::unknown;
    return *v_n == *v_r ? Tri::one : Tri::zero;
}

IndicatorSeries compute_series(const mpz_class& n, Base b, std::size_t window,
                               const EffortBudget& budget, FactorCache* cache) {
    check_hypotheses(n, b);
    if (window < 1) throw PreconditionViolated("window must be >= 1");
    FactorCache scratch;
    if (!cache) cache = &scratch;  // cyclotomic pieces repeat heavily across k

    IndicatorSeries series;
    series.n = n;
    series.base = b;
    series.values.reserve(window);
    for (std::uint64_t k = 1; k <= window; ++k) {
        series.values.push_back(indicator(n, b, k, budget, cache));
    }
    return series;
}

std::uint64_t detect_period(const IndicatorSeries& series) {
    if (series.unknown_count() > 0) {
        throw PreconditionViolated("period detection requires a fully decided series");
    }
    const std::size_t window = series.window();
    for (std::uint64_t omega = 1; omega <= window / 2; ++omega) {
        bool shifts_match = true;
        for (std::uint64_t k = 1; k + omega <= window; ++k) {
            if (series.at(k) != series.at(k + omega)) {
                shifts_match = false;
                break;
            }
        }
        if (!shifts_match) continue;

        // Certify that values depend only on gcd(k, omega).
        std::map<std::uint64_t, Tri> by_gcd;
        for (std::uint64_t k = 1; k <= window; ++k) {
            const std::uint64_t g = std::gcd(k, omega);
            auto [it, inserted] = by_gcd.emplace(g, series.at(k));
            if (!inserted && it->second != series.at(k)) {
                throw GcdInconsistency(
                    "series repeats with shift " + std::to_string(omega) +
                    " but does not depend only on gcd(k, " + std::to_string(omega) + ")");
            }
        }
        return omega;
    }
    throw NoPeriodFound("no period up to half the window of " + std::to_string(window) +
                        "; raise the window");
}

PeriodicDecomposition decompose(const IndicatorSeries& series, std::uint64_t omega) {
    if (series.unknown_count() > 0) {
        throw PreconditionViolated("decomposition requires a fully decided series");
    }
    const std::size_t window = series.window();
    if (omega < 1 || omega > window) {
        throw PreconditionViolated("omega must lie within the computed window");
    }

    // F(d) is read at k = d; first make sure equal gcds share a value.
    std::map<std::uint64_t, Tri> by_gcd;
    for (std::uint64_t k = 1; k <= window; ++k) {
        const std::uint64_t g = std::gcd(k, omega);
        auto [it, inserted] = by_gcd.emplace(g, series.at(k));
        if (!inserted && it->second != series.at(k)) {
            throw GcdInconsistency("series values do not depend only on gcd(k, omega)");
        }
    }

    PeriodicDecomposition result;
    const std::vector<std::uint64_t> divs = divisors_of(omega);
    for (std::uint64_t d : divs) {
        std::int64_t weight = 0;
        for (std::uint64_t e : divisors_of(d)) {
            weight += mobius(d / e) * static_cast<std::int64_t>(series.at(e));
        }
        if (weight != 0) result.terms.push_back({d, weight});
    }

    result.omega0 = 1;
    for (const auto& term : result.terms) {
        result.omega0 = std::lcm(result.omega0, term.modulus);
    }
    if (!result.terms.empty()) result.c = result.terms.front().modulus;

    for (std::uint64_t k = 1; k <= window; ++k) {
        if (result.reconstruct(k) != static_cast<std::int64_t>(series.at(k))) {
            throw ReconstructionMismatch("decomposition fails to reproduce the series at k = " +
                                         std::to_string(k) + "; omega was not a true period");
        }
    }
    return result;
}

PeriodAnalysis analyze(const mpz_class& n, Base b, std::size_t window, const EffortBudget& budget,
                       FactorCache* cache) {
    check_hypotheses(n, b);
    if (window < 1) throw PreconditionViolated("window must be >= 1");
    FactorCache scratch;
    if (!cache) cache = &scratch;

    const std::size_t cap = std::max(window, kWindowCap);
    std::size_t w = window;
    for (;;) {
        IndicatorSeries series = compute_series(n, b, w, budget, cache);
        if (series.unknown_count() > 0) {
            std::uint64_t k = 1;
            while (series.at(k) != Tri::unknown) ++k;
            throw UnknownVerdict(repeat_concat(n, k, b).get_str(),
                                 "indicator of " + n.get_str() + " at k = " + std::to_string(k) +
                                     " is unknown under the current budget");
        }
        try {
            const std::uint64_t omega = detect_period(series);
            PeriodicDecomposition decomposition = decompose(series, omega);
            return {std::move(series), omega, std::move(decomposition)};
        } catch (const NoPeriodFound&) {
            if (w >= cap) throw;
            w = std::min(cap, w * 2);
        }
    }
}

std::vector<mpz_class> infinitude_witnesses(const mpz_class& n, Base b, std::size_t count,
                                            const EffortBudget& budget, FactorCache* cache,
                                            std::size_t window) {
    FactorCache scratch;
    if (!cache) cache = &scratch;

    const VPalindromeReport base_report = is_v_palindrome(n, b, budget, cache);
    if (base_report.verdict == Verdict::unknown) {
        throw UnknownVerdict(n.get_str(), "membership of " + n.get_str() + " is unknown");
    }
    if (base_report.verdict != Verdict::yes) {
        throw PreconditionViolated("witness generation requires n itself to be a v-palindrome");
    }
    if (count == 0) return {};

    const PeriodAnalysis analysis = analyze(n, b, window, budget, cache);
    const std::uint64_t omega = analysis.decomposition.omega0;

    std::vector<mpz_class> witnesses;
    witnesses.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const std::uint64_t k = 1 + j * omega;
        const Tri verdict = indicator(n, b, k, budget, cache);
        if (verdict == Tri::unknown) {
            throw UnknownVerdict(repeat_concat(n, k, b).get_str(),
                                 "witness at k = " + std::to_string(k) + " is unknown");
        }
        if (verdict == Tri::zero) {
            throw WitnessVerificationFailed(
                "concatenation at k = " + std::to_string(k) +
                " is not a v-palindrome; the detected period was wrong on this window");
        }
        witnesses.push_back(repeat_concat(n, k, b));
    }
    return witnesses;
}

}  // namespace vpal
