#pragma once

// Exact rationals. Backed by GMP; mpq_class keeps every value canonical
// (gcd(num, den) = 1, den > 0, zero stored as 0/1).

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace psm {

using Rational = mpq_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "p", "-p", "p/q" or "-p/q" with decimal integers.
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool seen_digit = false, seen_slash = false, digit_after_slash = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            seen_digit = true;
            if (seen_slash) digit_after_slash = true;
        } else if (c == '/' && !seen_slash && seen_digit) {
            seen_slash = true;
        } else {
            throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
        }
    }
    if (!seen_digit || (seen_slash && !digit_after_slash))
        throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    if (s[0] == '+') s.erase(0, 1);
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

}  // namespace psm
