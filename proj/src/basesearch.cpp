#include "vpal/basesearch.hpp"

#include "vpal/errors.hpp"

namespace vpal {
namespace {

mpz_class base_square_minus_one(Base b) {
    check_base(b);
    mpz_class value(static_cast<unsigned long>(b));
    value *= static_cast<unsigned long>(b);
    return value - 1;
}

void check_pair(ValuePair pair) {
    if (pair.m1 == 0 || pair.m1 >= pair.m2) {
        throw PreconditionViolated("value pair requires 0 < m1 < m2");
    }
}

std::vector<PermissibleTriple> search_triples(Base b, ValuePair pair) {
    check_base(b);
    check_pair(pair);

    std::vector<PermissibleTriple> out;
    // a = t(m1*b - m2)/(b^2-1) must be positive.
    if (static_cast<std::uint64_t>(pair.m1) * static_cast<std::uint64_t>(b) <= pair.m2) {
        return out;
    }
    const mpz_class denom = base_square_minus_one(b);
    const mpz_class left = mpz_class(pair.m1) * static_cast<unsigned long>(b) - pair.m2;
    const mpz_class right = mpz_class(pair.m2) * static_cast<unsigned long>(b) - pair.m1;
    const mpz_class step = pair_divisor_obstruction(b, pair);
    const mpz_class bound = multiplier_bound(b, pair);  // exclusive
    const unsigned long pair_product =
        static_cast<unsigned long>(pair.m1) * static_cast<unsigned long>(pair.m2);

    for (mpz_class t = step; t < bound; t += step) {
        if (mpz_gcd_ui(nullptr, t.get_mpz_t(), pair_product) != 1) continue;
        PermissibleTriple triple;
        triple.base = b;
        triple.pair = pair;
        triple.t = t;
        mpz_divexact(triple.a.get_mpz_t(), mpz_class(t * left).get_mpz_t(), denom.get_mpz_t());
        mpz_divexact(triple.c.get_mpz_t(), mpz_class(t * right).get_mpz_t(), denom.get_mpz_t());
        if (const TripleDiagnosis check = verify_triple(triple); !check) {
            throw InternalInconsistency("constructed triple fails verification: " +
                                        check.violation);
        }
        out.push_back(std::move(triple));
    }
    return out;
}

}  // namespace

TripleDiagnosis verify_triple(const PermissibleTriple& triple) {
    const auto fail = [](std::string why) { return TripleDiagnosis{false, std::move(why)}; };
    if (triple.pair.m1 == 0 || triple.pair.m1 >= triple.pair.m2) {
        return fail("pair: requires 0 < m1 < m2");
    }
    if (triple.base < kMinBase || triple.base > kMaxBase) {
        return fail("base: outside [2, 2^31 - 1]");
    }
    if (triple.a < 1 || triple.c < 1 || triple.t < 1) {
        return fail("positivity: a, c, t must all be >= 1");
    }
    if (!(triple.a < triple.c)) {
        return fail("digit order: a < c required");
    }
    if (!(triple.c < triple.base)) {
        return fail("digit range: c < base required");
    }
    const unsigned long pair_product = static_cast<unsigned long>(triple.pair.m1) *
                                       static_cast<unsigned long>(triple.pair.m2);
    if (mpz_gcd_ui(nullptr, triple.t.get_mpz_t(), pair_product) != 1) {
        return fail("coprimality: gcd(t, " + std::to_string(pair_product) + ") != 1");
    }
    if (triple.two_digit() != triple.t * triple.pair.m1) {
        return fail("system: a*base + c != m1*t");
    }
    if (triple.reversed_two_digit() != triple.t * triple.pair.m2) {
        return fail("system: c*base + a != m2*t");
    }
    return {true, ""};
}

mpz_class pair_divisor_obstruction(Base b, ValuePair pair) {
    check_base(b);
    check_pair(pair);
    const mpz_class denom = base_square_minus_one(b);
    // m1*b - m2 may be negative for tiny bases; gcd is taken on magnitudes.
    mpz_class left = mpz_class(pair.m1) * static_cast<unsigned long>(b) - pair.m2;
    mpz_class right = mpz_class(pair.m2) * static_cast<unsigned long>(b) - pair.m1;
    mpz_abs(left.get_mpz_t(), left.get_mpz_t());
    mpz_abs(right.get_mpz_t(), right.get_mpz_t());
    mpz_class g1, g2;
    mpz_gcd(g1.get_mpz_t(), left.get_mpz_t(), denom.get_mpz_t());
    mpz_gcd(g2.get_mpz_t(), right.get_mpz_t(), denom.get_mpz_t());
    mpz_class lcm;
    mpz_lcm(lcm.get_mpz_t(), mpz_class(denom / g1).get_mpz_t(),
            mpz_class(denom / g2).get_mpz_t());
    return lcm;
}

mpz_class f_of(Base b) {
    return pair_divisor_obstruction(b, ValuePair{});
}

mpz_class multiplier_bound(Base b, ValuePair pair) {
    check_base(b);
    check_pair(pair);
    const mpz_class numerator = mpz_class(static_cast<unsigned long>(b)) * base_square_minus_one(b);
    const mpz_class denominator = mpz_class(pair.m2) * static_cast<unsigned long>(b) - pair.m1;
    // exclusive bound: largest t has t * denominator < numerator
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
    return q;
}

std::vector<PermissibleTriple> permissible_triples(Base b) {
    return search_triples(b, ValuePair{});
}

std::vector<PermissibleTriple> pair_search(Base b, ValuePair pair, const EffortBudget& budget,
                                           FactorCache* cache) {
    check_pair(pair);
    const auto v1 = v_of(mpz_class(static_cast<unsigned long>(pair.m1)), budget, cache);
    const auto v2 = v_of(mpz_class(static_cast<unsigned long>(pair.m2)), budget, cache);
    if (!v1 || !v2 || *v1 != *v2) {
        throw PreconditionViolated("pair (" + std::to_string(pair.m1) + ", " +
                                   std::to_string(pair.m2) + ") requires v(m1) = v(m2)");
    }
    std::vector<PermissibleTriple> triples = search_triples(b, pair);
    for (const auto& triple : triples) {
        const VPalindromeReport report = is_v_palindrome(triple.two_digit(), b, budget, cache);
        if (report.verdict == Verdict::unknown) {
            throw UnknownVerdict(triple.two_digit().get_str(),
                                 "two-digit witness could not be verified under the budget");
        }
        if (report.verdict != Verdict::yes) {
            throw InternalInconsistency("two-digit number " + triple.two_digit().get_str() +
                                        " from a verified triple is not a v-palindrome");
        }
    }
    return triples;
}

ConstructedWitness theorem_construct(std::uint64_t k, const EffortBudget& budget,
                                     FactorCache* cache) {
    if (k == 0 || k % 11 != 4) {
        throw PreconditionViolated("k must be a positive integer with k = 4 (mod 11)");
    }
    if (k > static_cast<std::uint64_t>(kMaxBase) / 30) {
        throw PreconditionViolated("base 30k exceeds the supported base range");
    }
    const mpz_class kk(static_cast<unsigned long>(k));
    PermissibleTriple triple;
    triple.base = static_cast<Base>(30 * k);
    check_base(triple.base);
    triple.pair = ValuePair{};

    const mpz_class a_num = 150 * kk - 6;
    const mpz_class c_num = 180 * kk - 5;
    const mpz_class t_num = 900 * kk * kk - 1;
    if (!mpz_divisible_ui_p(a_num.get_mpz_t(), 11) || !mpz_divisible_ui_p(c_num.get_mpz_t(), 11) ||
        !mpz_divisible_ui_p(t_num.get_mpz_t(), 11)) {
        throw InternalInconsistency("construction numerators are not all divisible by 11");
    }
    mpz_divexact_ui(triple.a.get_mpz_t(), a_num.get_mpz_t(), 11);
    mpz_divexact_ui(triple.c.get_mpz_t(), c_num.get_mpz_t(), 11);
    mpz_divexact_ui(triple.t.get_mpz_t(), t_num.get_mpz_t(), 11);

    if (const TripleDiagnosis check = verify_triple(triple); !check) {
        throw InternalInconsistency("constructed triple fails verification: " + check.violation);
    }
    ConstructedWitness witness;
    witness.base = triple.base;
    witness.report = is_v_palindrome(triple.two_digit(), triple.base, budget, cache);
    witness.triple = std::move(triple);
    if (witness.report.verdict == Verdict::unknown) {
        throw UnknownVerdict(witness.triple.two_digit().get_str(),
                             "two-digit witness could not be verified under the budget");
    }
    if (witness.report.verdict != Verdict::yes) {
        throw InternalInconsistency("constructed two-digit number is not a v-palindrome");
    }
    return witness;
}

std::vector<ConstructedWitness> corollary_bases(Base max_b, const EffortBudget& budget,
                                                FactorCache* cache) {
    std::vector<ConstructedWitness> out;
    for (Base b = 120; b <= max_b; b += 330) {
        out.push_back(theorem_construct(static_cast<std::uint64_t>(b / 30), budget, cache));
    }
    return out;
}

bool coprimality_classes(Base b) {
    const mpz_class denom = base_square_minus_one(b);
    const bool by_gcd = mpz_gcd_ui(nullptr, denom.get_mpz_t(), 30) == 1;
    const long r5 = b % 5;
    const bool by_congruence = (b % 6 == 0) && (r5 == 0 || r5 == 2 || r5 == 3);
    if (by_gcd != by_congruence) {
        throw InternalInconsistency("gcd(b^2-1, 30) and the congruence classes disagree at b = " +
                                    std::to_string(b));
    }
    return by_gcd;
}

}  // namespace vpal
