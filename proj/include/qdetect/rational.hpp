#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdetect {

// Exact coefficient domain. cpp_rational keeps values in lowest terms with a
// positive denominator, which is exactly the canonical form we rely on for
// structural equality.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

inline int sign_of(const Integer& n) {
    if (n > 0) return 1;
    if (n < 0) return -1;
    return 0;
}

inline Integer pow_integer(const Integer& base, std::uint64_t e) {
    Integer acc(1);
    Integer b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return acc;
}

// Integer exponents of either sign; 0^negative is rejected.
inline Rational pow_rational(const Rational& base, std::int64_t e) {
    if (e >= 0) {
        return Rational(pow_integer(numerator(base), static_cast<std::uint64_t>(e)),
                        pow_integer(denominator(base), static_cast<std::uint64_t>(e)));
    }
    if (base == 0) throw std::domain_error("pow_rational: zero base with negative exponent");
    const std::uint64_t k = static_cast<std::uint64_t>(-e);
    return Rational(pow_integer(denominator(base), k), pow_integer(numerator(base), k));
}

inline Integer binomial(unsigned n, unsigned k) {
    if (k > n) return Integer(0);
    if (k > n - k) k = n - k;
    Integer acc(1);
    for (unsigned i = 1; i <= k; ++i) {
        acc *= Integer(n - k + i);
        acc /= Integer(i);
    }
    return acc;
}

// "p/q" with q > 0 implied by canonical form; plain "p" means denominator 1.
inline std::string rational_to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rational(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    const auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(Integer(std::string(s)));
        }
        Integer num{std::string(s.substr(0, slash))};
        Integer den{std::string(s.substr(slash + 1))};
        if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(std::string("parse_rational: bad literal '") + std::string(s) + "'");
    }
}

}  // namespace qdetect
