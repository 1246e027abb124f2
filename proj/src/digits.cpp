#include "vpal/digits.hpp"

#include <algorithm>

#include "vpal/errors.hpp"

namespace vpal {

void check_base(Base b) {
    if (b < kMinBase || b > kMaxBase) {
        throw PreconditionViolated("base must be in [2, 2^31 - 1], got " + std::to_string(b));
    }
}

BaseDigits to_digits(const mpz_class& n, Base b) {
    check_base(b);
    if (n < 1) {
        throw PreconditionViolated("to_digits requires n >= 1");
    }
    BaseDigits out;
    out.base = b;
    mpz_class rest = n;
    const unsigned long base_ul = static_cast<unsigned long>(b);
    while (rest != 0) {
        const unsigned long digit = mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), base_ul);
        out.digits.push_back(static_cast<std::uint32_t>(digit));
    }
    return out;
}

mpz_class from_digits(const BaseDigits& d) {
    check_base(d.base);
    if (d.digits.empty()) {
        throw PreconditionViolated("digit list must be nonempty");
    }
    if (d.digits.back() == 0) {
        throw PreconditionViolated("leading digit must be nonzero");
    }
    mpz_class acc = 0;
    for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
        if (static_cast<Base>(*it) >= d.base) {
            throw PreconditionViolated("digit " + std::to_string(*it) + " out of range for base " +
                                       std::to_string(d.base));
        }
        acc = acc * static_cast<unsigned long>(d.base) + static_cast<unsigned long>(*it);
    }
    return acc;
}

std::size_t digit_length(const mpz_class& n, Base b) {
    return to_digits(n, b).length();
}

mpz_class reverse_digits(const mpz_class& n, Base b) {
    BaseDigits d = to_digits(n, b);
    mpz_class acc = 0;
    for (std::uint32_t digit : d.digits) {
        acc = acc * static_cast<unsigned long>(b) + static_cast<unsigned long>(digit);
    }
    return acc;
}

bool is_palindrome(const mpz_class& n, Base b) {
    const BaseDigits d = to_digits(n, b);
    return std::equal(d.digits.begin(), d.digits.end(), d.digits.rbegin());
}

mpz_class repeat_concat(const mpz_class& n, std::uint64_t k, Base b) {
    check_base(b);
    if (n < 1 || k < 1) {
        throw PreconditionViolated("repeat_concat requires n >= 1 and k >= 1");
    }
    const std::size_t block = digit_length(n, b);
    // n * (b^(L*k) - 1) / (b^L - 1)
    mpz_class base_pow_block;
    mpz_ui_pow_ui(base_pow_block.get_mpz_t(), static_cast<unsigned long>(b),
                  static_cast<unsigned long>(block));
    mpz_class numerator;
    mpz_pow_ui(numerator.get_mpz_t(), base_pow_block.get_mpz_t(), static_cast<unsigned long>(k));
    numerator -= 1;
    const mpz_class denominator = base_pow_block - 1;
    mpz_class ratio;
    mpz_divexact(ratio.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
    return n * ratio;
}

std::string render_digits(const BaseDigits& d) {
    std::string out;
    for (auto it = d.digits.rbegin(); it != d.digits.rend(); ++it) {
        if (!out.empty()) out.push_back(',');
        out += std::to_string(*it);
    }
    return out;
}

}  // namespace vpal
