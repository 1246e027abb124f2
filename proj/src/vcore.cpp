#include "vpal/vcore.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "vpal/errors.hpp"

namespace vpal {
namespace {

// Verdicts for n = 1..limit, computed in chunks. Throws UnknownVerdict for
// the smallest undecidable n in range.
std::vector<Verdict> scan_verdicts(Base b, std::uint64_t limit, const EffortBudget& budget,
                                   FactorCache* cache, unsigned workers) {
    std::vector<Verdict> verdicts(limit + 1, Verdict::no);
    if (limit == 0) return verdicts;

    std::atomic<std::uint64_t> first_unknown{0};
    auto run_chunk = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t n = lo; n <= hi; ++n) {
            const VPalindromeReport r = is_v_palindrome(mpz_class(static_cast<unsigned long>(n)),
                                                        b, budget, cache);
            verdicts[n] = r.verdict;
            if (r.verdict == Verdict::unknown) {
                std::uint64_t seen = first_unknown.load();
                while ((seen == 0 || n < seen) &&
                       !first_unknown.compare_exchange_weak(seen, n)) {
                }
            }
        }
    };

    if (workers <= 1) {
        run_chunk(1, limit);
    } else {
        const std::uint64_t chunk = std::max<std::uint64_t>(256, limit / (workers * 8) + 1);
        std::atomic<std::uint64_t> next{1};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint64_t lo = next.fetch_add(chunk);
                    if (lo > limit) return;
                    run_chunk(lo, std::min(limit, lo + chunk - 1));
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    if (const std::uint64_t bad = first_unknown.load(); bad != 0) {
        throw UnknownVerdict(std::to_string(bad),
                             "verdict for " + std::to_string(bad) + " in base " +
                                 std::to_string(b) + " is unknown under the current budget");
    }
    return verdicts;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(Condition c) {
    switch (c) {
        case Condition::none: return "none";
        case Condition::divisible_by_base: return "divisible_by_base";
        case Condition::equals_own_reversal: return "equals_own_reversal";
        case Condition::v_mismatch: return "v_mismatch";
    }
    return "none";
}

mpz_class v_of_factors(const Factorization& f) {
    if (!f.complete()) {
        throw PreconditionViolated("v_of_factors requires a complete factorization");
    }
    mpz_class sum = 0;
    for (const auto& t : f.terms) {
        sum += t.prime;
        if (t.exponent >= 2) sum += t.exponent;
    }
    return sum;
}

std::optional<mpz_class> v_of(const mpz_class& n, const EffortBudget& budget, FactorCache* cache) {
    if (n < 1) throw PreconditionViolated("v is defined on positive integers");
    const Factorization f = factorize(n, budget, cache);
    if (!f.complete()) return std::nullopt;
    return v_of_factors(f);
}

VPalindromeReport is_v_palindrome(const mpz_class& n, Base b, const EffortBudget& budget,
                                  FactorCache* cache) {
    if (n < 1) throw PreconditionViolated("is_v_palindrome requires n >= 1");
    check_base(b);

    VPalindromeReport report;
    report.n = n;
    report.base = b;
    report.reversal = reverse_digits(n, b);

    if (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(b))) {
        report.verdict = Verdict::no;
        report.failed = Condition::divisible_by_base;
        return report;
    }
    if (n == report.reversal) {
        report.verdict = Verdict::no;
        report.failed = Condition::equals_own_reversal;
        return report;
    }
    report.v_n = v_of(n, budget, cache);
    report.v_reversal = v_of(report.reversal, budget, cache);
    if (!report.v_n || !report.v_reversal) {
        report.verdict = Verdict::unknown;
        return report;
    }
    if (*report.v_n == *report.v_reversal) {
        report.verdict = Verdict::yes;
    } else {
        report.verdict = Verdict::no;
        report.failed = Condition::v_mismatch;
    }
    return report;
}

std::vector<std::uint64_t> enumerate_v_palindromes(Base b, std::uint64_t limit,
                                                   const EffortBudget& budget, FactorCache* cache,
                                                   unsigned workers) {
    check_base(b);
    if (limit < 1) throw PreconditionViolated("enumeration limit must be >= 1");
    const std::vector<Verdict> verdicts = scan_verdicts(b, limit, budget, cache, workers);
    std::vector<std::uint64_t> members;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        if (verdicts[n] == Verdict::yes) members.push_back(n);
    }
    return members;
}

std::uint64_t min_v_palindrome(Base b, const EffortBudget& budget, FactorCache* cache,
                               std::uint64_t scan_cap) {
    check_base(b);
    for (std::uint64_t n = 1; n <= scan_cap; ++n) {
        const VPalindromeReport r =
            is_v_palindrome(mpz_class(static_cast<unsigned long>(n)), b, budget, cache);
        if (r.verdict == Verdict::yes) return n;
        if (r.verdict == Verdict::unknown) {
            throw UnknownVerdict(std::to_string(n),
                                 "cannot certify the minimum: verdict for " + std::to_string(n) +
                                     " is unknown");
        }
    }
    throw SearchCapExceeded("no v-palindrome in base " + std::to_string(b) + " up to " +
                            std::to_string(scan_cap));
}

GapReport longest_gap(Base b, std::uint64_t limit, const EffortBudget& budget, FactorCache* cache,
                      unsigned workers) {
    check_base(b);
    if (limit < 1) throw PreconditionViolated("gap scan limit must be >= 1");
    const std::vector<Verdict> verdicts = scan_verdicts(b, limit, budget, cache, workers);

    GapReport best;
    std::uint64_t run_start = 1;
    std::uint64_t run_length = 0;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        if (verdicts[n] == Verdict::yes) {
            run_length = 0;
            run_start = n + 1;
        } else {
            ++run_length;
            if (run_length > best.length) {
                best.start = run_start;
                best.length = run_length;
            }
        }
    }
    return best;
}

VPalindromeReport family_18rho(const mpz_class& rho, const EffortBudget& budget,
                               FactorCache* cache) {
    if (rho < 1) throw PreconditionViolated("rho must be a positive integer");
    const BaseDigits d = to_digits(rho, 10);
    const bool zero_one_only =
        std::all_of(d.digits.begin(), d.digits.end(), [](std::uint32_t x) { return x <= 1; });
    if (!zero_one_only || !is_palindrome(rho, 10)) {
        throw PreconditionViolated("rho must be a base-ten palindrome over the digits {0,1}");
    }
    return is_v_palindrome(18 * rho, 10, budget, cache);
}

}  // namespace vpal
