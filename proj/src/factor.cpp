#include "vpal/factor.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

#include "vpal/errors.hpp"

namespace vpal {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSieveCeiling = 100'000'000;  // absolute cap on sieve size

std::shared_ptr<const std::vector<std::uint32_t>> prime_snapshot(std::uint64_t bound) {
    static std::mutex mutex;
    static std::shared_ptr<const std::vector<std::uint32_t>> table;
    static std::uint64_t table_bound = 0;

    bound = std::min(bound, kSieveCeiling);
    std::lock_guard lock(mutex);
    if (bound <= table_bound && table) return table;

    std::vector<bool> composite(bound + 1, false);
    auto primes = std::make_shared<std::vector<std::uint32_t>>();
    for (std::uint64_t p = 2; p <= bound; ++p) {
        if (composite[p]) continue;
        primes->push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = true;
    }
    table = primes;
    table_bound = bound;
    return table;
}

bool miller_rabin_witness(const mpz_class& n, const mpz_class& n_minus_1, const mpz_class& odd_part,
                          unsigned long twos, unsigned long base) {
    mpz_class a(base);
    a %= n;
    if (a == 0) return false;  // base collides with n, no information
    mpz_class x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), odd_part.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) return false;
    for (unsigned long i = 1; i < twos; ++i) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == n_minus_1) return false;
    }
    return true;  // composite witnessed
}

struct Deadline {
    Clock::time_point at;
    bool expired() const { return Clock::now() >= at; }
};

// Brent's cycle variant of Pollard rho. Charges squarings against
// `iterations`; returns a nontrivial factor or nullopt.
std::optional<mpz_class> brent_rho(const mpz_class& n, std::uint64_t& iterations,
                                   const Deadline& deadline, unsigned long seed) {
    if (mpz_even_p(n.get_mpz_t())) return mpz_class(2);

    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xB5E57ul + seed * 7919ul);
    mpz_class y = rng.get_z_range(n - 3) + 2;
    mpz_class c = rng.get_z_range(n - 3) + 1;
    mpz_class x, ys, q(1), g(1), diff;
    std::uint64_t r = 1;
    constexpr std::uint64_t kBatch = 128;

    while (g == 1) {
        x = y;
        for (std::uint64_t i = 0; i < r; ++i) {
            y = (y * y + c) % n;
        }
        if (iterations <= r) return std::nullopt;
        iterations -= r;
        std::uint64_t k = 0;
        while (k < r && g == 1) {
            if (deadline.expired()) return std::nullopt;
            ys = y;
            const std::uint64_t steps = std::min(kBatch, r - k);
            if (iterations <= steps) return std::nullopt;
            iterations -= steps;
            for (std::uint64_t i = 0; i < steps; ++i) {
                y = (y * y + c) % n;
                diff = x - y;
                mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
                q = q * diff % n;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += steps;
        }
        r *= 2;
    }
    if (g == n) {
        // backtrack one step at a time to isolate the factor
        do {
            ys = (ys * ys + c) % n;
            diff = x - ys;
            mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
            mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    if (g == n || g == 1) return std::nullopt;
    return g;
}

// Pollard p-1, stage 1 to B1 with a stage 2 to B2. Finds p when p-1 is
// B1-smooth apart from at most one prime below B2.
std::optional<mpz_class> pollard_pm1(const mpz_class& n, std::uint64_t& iterations,
                                     const Deadline& deadline) {
    constexpr std::uint64_t kB1 = 200'000;
    constexpr std::uint64_t kB2 = 5'000'000;
    if (iterations < kB1) return std::nullopt;

    auto primes = prime_snapshot(kB2);
    mpz_class a(2), g, am1;
    std::uint64_t charged = 0;
    for (std::uint32_t p : *primes) {
        if (p > kB1) break;
        std::uint64_t pe = p;
        while (pe <= kB1 / p) pe *= p;
        mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(pe), n.get_mpz_t());
        if ((++charged & 1023) == 0 && deadline.expired()) return std::nullopt;
    }
    iterations -= std::min<std::uint64_t>(iterations, kB1);
    am1 = a - 1;
    mpz_gcd(g.get_mpz_t(), am1.get_mpz_t(), n.get_mpz_t());
    if (g > 1 && g < n) return g;
    if (g == n) return std::nullopt;

    // stage 2: walk primes q in (B1, B2], stepping a^q by precomputed even gaps
    if (iterations < (kB2 - kB1) / 8) return std::nullopt;
    std::vector<mpz_class> gap_powers(64);  // gap_powers[j] = a^(2(j+1)) mod n
    mpz_class a2;
    mpz_powm_ui(a2.get_mpz_t(), a.get_mpz_t(), 2, n.get_mpz_t());
    gap_powers[0] = a2;
    for (std::size_t j = 1; j < gap_powers.size(); ++j) {
        gap_powers[j] = gap_powers[j - 1] * a2 % n;
    }
    auto first = std::upper_bound(primes->begin(), primes->end(), kB1);
    if (first == primes->end()) return std::nullopt;
    mpz_class aq, acc(1), term;
    mpz_powm_ui(aq.get_mpz_t(), a.get_mpz_t(), *first, n.get_mpz_t());
    std::uint64_t prev = *first;
    std::uint64_t done = 0;
    for (auto it = first; it != primes->end(); ++it) {
        const std::uint64_t gap = *it - prev;
        if (gap > 0) {
            const std::size_t idx = gap / 2 - 1;
            if (idx < gap_powers.size()) {
                aq = aq * gap_powers[idx] % n;
            } else {
                mpz_class jump;
                mpz_powm_ui(jump.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(gap),
                            n.get_mpz_t());
                aq = aq * jump % n;
            }
            prev = *it;
        }
        term = aq - 1;
        acc = acc * term % n;
        if ((++done & 255) == 0) {
            if (deadline.expired()) break;
            mpz_gcd(g.get_mpz_t(), acc.get_mpz_t(), n.get_mpz_t());
            if (g == n) return std::nullopt;
            if (g > 1) return g;
        }
    }
    iterations -= std::min<std::uint64_t>(iterations, (kB2 - kB1) / 8);
    mpz_gcd(g.get_mpz_t(), acc.get_mpz_t(), n.get_mpz_t());
    if (g > 1 && g < n) return g;
    return std::nullopt;
}

std::optional<std::pair<mpz_class, unsigned long>> perfect_power_split(const mpz_class& n) {
    if (!mpz_perfect_power_p(n.get_mpz_t())) return std::nullopt;
    const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (unsigned long k = 2; k <= bits; ++k) {
        mpz_class root;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
            return std::make_pair(root, k);
        }
    }
    return std::nullopt;
}

void add_term(std::vector<FactorTerm>& terms, const mpz_class& prime, std::uint32_t exponent) {
    for (auto& t : terms) {
        if (t.prime == prime) {
            t.exponent += exponent;
            return;
        }
    }
    terms.push_back({prime, exponent});
}

}  // namespace

void EffortBudget::validate() const {
    if (trial_division_bound < 2 || pollard_iteration_cap == 0 || overall_time_cap.count() <= 0) {
        throw PreconditionViolated("all effort budget components must be positive");
    }
}

mpz_class Factorization::product() const {
    mpz_class acc = cofactor;
    mpz_class power;
    for (const auto& t : terms) {
        mpz_pow_ui(power.get_mpz_t(), t.prime.get_mpz_t(), t.exponent);
        acc *= power;
    }
    return acc;
}

bool Factorization::squarefree() const {
    if (!complete()) {
        throw PreconditionViolated("squarefree() requires a complete factorization");
    }
    return std::all_of(terms.begin(), terms.end(),
                       [](const FactorTerm& t) { return t.exponent == 1; });
}

bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    static const unsigned long kSmall[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    for (unsigned long p : kSmall) {
        if (mpz_cmp_ui(n.get_mpz_t(), p) == 0) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }

    // Deterministic witness set below 3317044064679887385961981.
    static const mpz_class kDeterministicBound("3317044064679887385961981");
    if (n < kDeterministicBound) {
        const mpz_class n_minus_1 = n - 1;
        mpz_class odd_part = n_minus_1;
        unsigned long twos = 0;
        while (mpz_even_p(odd_part.get_mpz_t())) {
            odd_part >>= 1;
            ++twos;
        }
        static const unsigned long kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
        for (unsigned long a : kBases) {
            if (miller_rabin_witness(n, n_minus_1, odd_part, twos, a)) return false;
        }
        return true;
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::optional<Factorization> FactorCache::lookup(const mpz_class& n) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(n.get_str());
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void FactorCache::store(const mpz_class& n, const Factorization& f) {
    std::unique_lock lock(mutex_);
    entries_[n.get_str()] = f;
}

std::size_t FactorCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::string format_factorization(const Factorization& f) {
    std::string out;
    for (const auto& t : f.terms) {
        if (!out.empty()) out.push_back(' ');
        out += t.prime.get_str();
        out.push_back('^');
        out += std::to_string(t.exponent);
    }
    if (!f.complete()) {
        if (!out.empty()) out.push_back(' ');
        out += "+ ";
        out += f.cofactor.get_str();
        out.push_back('?');
    }
    return out;
}

Factorization parse_factorization(const std::string& text) {
    Factorization f;
    std::istringstream in(text);
    std::string token;
    bool cofactor_next = false;
    while (in >> token) {
        if (token == "+") {
            cofactor_next = true;
            continue;
        }
        if (cofactor_next) {
            if (token.empty() || token.back() != '?') {
                throw ParseError(0, "cofactor must end with '?': " + token);
            }
            f.cofactor = mpz_class(token.substr(0, token.size() - 1));
            cofactor_next = false;
            continue;
        }
        const auto caret = token.find('^');
        if (caret == std::string::npos) {
            throw ParseError(0, "expected p^e term, got: " + token);
        }
        FactorTerm term;
        term.prime = mpz_class(token.substr(0, caret));
        term.exponent = static_cast<std::uint32_t>(std::stoul(token.substr(caret + 1)));
        if (term.exponent == 0) throw ParseError(0, "zero exponent in: " + token);
        f.terms.push_back(std::move(term));
    }
    if (cofactor_next) throw ParseError(0, "dangling '+' without cofactor");
    for (std::size_t i = 1; i < f.terms.size(); ++i) {
        if (f.terms[i - 1].prime >= f.terms[i].prime) {
            throw ParseError(0, "primes must be strictly increasing");
        }
    }
    return f;
}

void FactorCache::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open cache file: " + path.string());
    std::string line;
    std::size_t line_number = 0;
    std::unique_lock lock(mutex_);
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#') continue;
        const auto space = line.find(' ');
        const std::string key = line.substr(0, space);
        Factorization f;
        try {
            f = parse_factorization(space == std::string::npos ? "" : line.substr(space + 1));
        } catch (const ParseError& e) {
            throw ParseError(line_number, std::string(e.what()) + " (cache line " +
                                              std::to_string(line_number) + ")");
        }
        if (f.product() != mpz_class(key)) {
            throw ParseError(line_number, "cache entry does not multiply back to its key: " + key);
        }
        entries_[key] = std::move(f);
    }
}

void FactorCache::save_file(const std::filesystem::path& path) const {
    std::vector<std::pair<std::string, const Factorization*>> rows;
    {
        std::shared_lock lock(mutex_);
        rows.reserve(entries_.size());
        for (const auto& [key, value] : entries_) rows.emplace_back(key, &value);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
        return a.first < b.first;
    });
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write cache file: " + path.string());
    for (const auto& [key, value] : rows) {
        out << key;
        const std::string payload = format_factorization(*value);
        if (!payload.empty()) out << ' ' << payload;
        out << '\n';
    }
}

Factorization factorize(const mpz_class& n, const EffortBudget& budget, FactorCache* cache,
                        std::span<const mpz_class> hints) {
    if (n < 1) throw PreconditionViolated("factorize requires n >= 1");
    budget.validate();

    if (cache) {
        if (auto hit = cache->lookup(n); hit && hit->complete()) return *hit;
    }

    Factorization result;
    mpz_class remaining = n;
    const Deadline deadline{Clock::now() + budget.overall_time_cap};
    std::uint64_t iterations = budget.pollard_iteration_cap;

    // Resume from a cached partial result when available.
    if (cache) {
        if (auto hit = cache->lookup(n)) {
            result.terms = hit->terms;
            remaining = hit->cofactor;
        }
    }

    // Trial division by sieved primes.
    if (remaining > 1) {
        auto primes = prime_snapshot(budget.trial_division_bound);
        mpz_class square;
        for (std::uint32_t p : *primes) {
            if (static_cast<std::uint64_t>(p) > budget.trial_division_bound) break;
            square = static_cast<unsigned long>(p);
            square *= static_cast<unsigned long>(p);
            if (square > remaining) break;
            if (!mpz_divisible_ui_p(remaining.get_mpz_t(), p)) continue;
            std::uint32_t exponent = 0;
            do {
                mpz_divexact_ui(remaining.get_mpz_t(), remaining.get_mpz_t(), p);
                ++exponent;
            } while (mpz_divisible_ui_p(remaining.get_mpz_t(), p));
            add_term(result.terms, mpz_class(p), exponent);
        }
        // A survivor below bound^2 has no prime factor <= bound twice over.
        if (remaining > 1) {
            mpz_class bound_sq(static_cast<unsigned long>(
                std::min<std::uint64_t>(budget.trial_division_bound, kSieveCeiling)));
            bound_sq *= bound_sq;
            if (remaining < bound_sq) {
                add_term(result.terms, remaining, 1);
                remaining = 1;
            }
        }
    }

    // Composite cofactors awaiting harder methods, with multiplicities.
    std::vector<std::pair<mpz_class, std::uint32_t>> queue;
    std::vector<std::pair<mpz_class, std::uint32_t>> unfactored;
    if (remaining > 1) queue.emplace_back(remaining, 1);

    // Split off any algebraic hints first.
    if (!hints.empty()) {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::pair<mpz_class, std::uint32_t>> next;
            for (auto& [value, mult] : queue) {
                bool split = false;
                for (const mpz_class& hint : hints) {
                    if (hint <= 1) continue;
                    mpz_class g;
                    mpz_gcd(g.get_mpz_t(), value.get_mpz_t(), hint.get_mpz_t());
                    if (g > 1 && g < value) {
                        next.emplace_back(g, mult);
                        next.emplace_back(value / g, mult);
                        split = changed = true;
                        break;
                    }
                }
                if (!split) next.emplace_back(std::move(value), mult);
            }
            queue = std::move(next);
        }
    }

    while (!queue.empty()) {
        auto [value, mult] = std::move(queue.back());
        queue.pop_back();
        if (value == 1) continue;
        if (is_prime(value)) {
            add_term(result.terms, value, mult);
            continue;
        }
        if (auto power = perfect_power_split(value)) {
            queue.emplace_back(power->first, mult * static_cast<std::uint32_t>(power->second));
            continue;
        }
        std::optional<mpz_class> factor;
        if (!deadline.expired()) factor = pollard_pm1(value, iterations, deadline);
        for (unsigned long attempt = 0; !factor && attempt < 3; ++attempt) {
            if (deadline.expired() || iterations == 0) break;
            factor = brent_rho(value, iterations, deadline, attempt);
        }
        if (factor) {
            queue.emplace_back(*factor, mult);
            queue.emplace_back(value / *factor, mult);
        } else {
            unfactored.emplace_back(std::move(value), mult);
        }
    }

    result.cofactor = 1;
    mpz_class power;
    for (const auto& [value, mult] : unfactored) {
        mpz_pow_ui(power.get_mpz_t(), value.get_mpz_t(), mult);
        result.cofactor *= power;
    }
    std::sort(result.terms.begin(), result.terms.end(),
              [](const FactorTerm& a, const FactorTerm& b) { return a.prime < b.prime; });

    if (result.product() != n) {
        throw InternalInconsistency("factorization does not multiply back to its input");
    }
    if (cache) cache->store(n, result);
    return result;
}

}  // namespace vpal
