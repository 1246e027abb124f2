#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace vpal {

// Positional bases are machine integers in [2, 2^31 - 1]; the values they
// represent are arbitrary-precision.
using Base = std::int64_t;

inline constexpr Base kMinBase = 2;
inline constexpr Base kMaxBase = 2147483647;  // 2^31 - 1

// Throws PreconditionViolated unless kMinBase <= b <= kMaxBase.
void check_base(Base b);

// Base-b representation of a positive integer, least-significant digit
// first. The most significant digit (back of the vector) is nonzero.
struct BaseDigits {
    Base base = 10;
    std::vector<std::uint32_t> digits;

    std::size_t length() const { return digits.size(); }
    bool operator==(const BaseDigits&) const = default;
};

BaseDigits to_digits(const mpz_class& n, Base b);

// Inverse of to_digits; validates the BaseDigits invariants.
mpz_class from_digits(const BaseDigits& d);

// Number of base-b digits of n.
std::size_t digit_length(const mpz_class& n, Base b);

// Digit reversal r_b(n). Leading zeros of the reversal drop out by
// re-normalization, e.g. r_10(200) = 2. Accepts multiples of b.
mpz_class reverse_digits(const mpz_class& n, Base b);

// True iff n reads the same in both directions in base b.
bool is_palindrome(const mpz_class& n, Base b);

// Repeated concatenation n(k)_b: the integer whose base-b digits are k
// copies of n's digit block, i.e. n * (b^(L*k) - 1) / (b^L - 1).
mpz_class repeat_concat(const mpz_class& n, std::uint64_t k, Base b);

// Comma-separated digits, most significant first: "1,0,1,0,1,1,1,1".
std::string render_digits(const BaseDigits& d);

}  // namespace vpal
