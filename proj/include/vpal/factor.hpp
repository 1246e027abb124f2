#pragma once

#include <gmpxx.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace vpal {

// How hard factorize() is allowed to try before reporting an incomplete
// result. Repeated concatenations reach hundreds of digits, so every stage
// is bounded and an honest "could not finish" outcome is part of the API.
struct EffortBudget {
    std::uint64_t trial_division_bound = 1'000'000;
    std::uint64_t pollard_iteration_cap = 10'000'000;
    std::chrono::milliseconds overall_time_cap{10'000};

    void validate() const;  // throws PreconditionViolated if any field <= 0
};

struct FactorTerm {
    mpz_class prime;
    std::uint32_t exponent = 1;

    bool operator==(const FactorTerm&) const = default;
};

// Prime factorization, possibly partial. `terms` holds certified primes in
// strictly increasing order; `cofactor` is 1 when the factorization is
// complete and the unfactored remainder otherwise. The empty factorization
// with cofactor 1 represents n = 1.
struct Factorization {
    std::vector<FactorTerm> terms;
    mpz_class cofactor = 1;

    bool complete() const { return cofactor == 1; }
    mpz_class product() const;  // recomputes n, cofactor included
    bool squarefree() const;    // complete factorizations only

    bool operator==(const Factorization&) const = default;
};

// Primality test used to certify every FactorTerm. Deterministic
// Miller-Rabin with the 13-prime witness set for n < 3317044064679887385961981
// (no false positives in that range); beyond it, GMP's Baillie-PSW plus 40
// Miller-Rabin rounds, for which no counterexample is known.
bool is_prime(const mpz_class& n);

// Thread-safe map from integer (decimal string) to its best known
// factorization, complete or partial. Concurrent readers are allowed and
// writers are serialized; identical keys always carry value-identical
// entries, so last-writer-wins is harmless.
class FactorCache {
public:
    FactorCache() = default;

    std::optional<Factorization> lookup(const mpz_class& n) const;
    void store(const mpz_class& n, const Factorization& f);
    std::size_t size() const;

    // One entry per line: `<n> <p1>^<e1> <p2>^<e2> ... [+ <cofactor>?]`,
    // all decimal, `?` marking an unfactored cofactor. UTF-8, LF endings.
    void load_file(const std::filesystem::path& path);  // merges into memory
    void save_file(const std::filesystem::path& path) const;

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, Factorization> entries_;
};

// Factors n >= 1 under the given budget. Stages: cached result, trial
// division by sieved primes, then per remaining cofactor a primality check,
// perfect-power splitting, Pollard p-1 and Brent's variant of Pollard rho,
// all charged against the iteration cap and the time cap. `hints` supplies
// known partial divisors (e.g. from algebraic structure); each is split off
// by gcd before the generic ladder runs. The result is complete unless the
// budget ran out, in which case `cofactor` carries the unfactored part.
Factorization factorize(const mpz_class& n, const EffortBudget& budget = {},
                        FactorCache* cache = nullptr,
                        std::span<const mpz_class> hints = {});

// Render/parse the cache line payload (everything after the key).
std::string format_factorization(const Factorization& f);
Factorization parse_factorization(const std::string& text);

}  // namespace vpal
