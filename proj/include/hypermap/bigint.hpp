#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hypermap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown when an exhaustive computation would exceed a configured size cap.
class SizeLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Catalan(k) = binom(2k, k) / (k + 1); Catalan(0) = 1.
inline BigInt catalan(unsigned k)
{
    BigInt c = 1;
    for (unsigned i = 0; i < k; ++i) {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    return c;
}

inline BigInt binomial(unsigned n, unsigned k)
{
    if (k > n) {
        return 0;
    }
    BigInt c = 1;
    for (unsigned i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
    }
    return c;
}

inline BigInt ipow(const BigInt& base, unsigned exponent)
{
    BigInt result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        result *= base;
    }
    return result;
}

inline std::string to_string(const BigInt& value)
{
    return value.str();
}

} // namespace hypermap
