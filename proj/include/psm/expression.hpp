#pragma once

// Recursive-descent parser and printer for the expression grammar shared by
// every algebra in the library:
//
//   expr     := term { ("+"|"-") term }
//   term     := factor { "*" factor }
//   factor   := ["-"] base ["^" uint]
//   base     := rational | identifier | "(" expr ")"
//   rational := uint ["/" uint]
//   identifier := letter { letter | digit | "_" }
//
// There is no implicit multiplication and exponents are non-negative integer
// literals. The parser is generic over the target algebra; the printer emits
// text that parses back to the same normal form.

#include "psm/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psm {

using Exponents = std::vector<std::uint16_t>;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          message_(message),
          position_(position) {}

    std::size_t position() const { return position_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    std::size_t position_;
};

inline bool is_identifier(std::string_view s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

/// Hooks that map grammar leaves onto values of an algebra.
/// `identifier` returns nullopt for names it does not know.
template <class Algebra>
struct ExpressionBuilder {
    std::function<std::optional<Algebra>(std::string_view)> identifier;
    std::function<Algebra(const Rational&)> constant;
};

namespace detail {

template <class Algebra>
class ExpressionParser {
public:
    ExpressionParser(std::string_view text, const ExpressionBuilder<Algebra>& builder)
        : text_(text), builder_(builder) {}

    Algebra parse() {
        Algebra result = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        return result;
    }

private:
    std::string_view text_;
    const ExpressionBuilder<Algebra>& builder_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }
    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Algebra expr() {
        Algebra acc = term();
        for (;;) {
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Algebra term() {
        Algebra acc = factor();
        while (accept('*')) acc = acc * factor();
        return acc;
    }

    Algebra factor() {
        bool negate = accept('-');
        Algebra b = base();
        if (accept('^')) {
            unsigned e = exponent();
            b = power(b, e);
        }
        return negate ? -b : b;
    }

    Algebra power(const Algebra& b, unsigned e) {
        Algebra result = builder_.constant(Rational(1));
        Algebra sq = b;
        while (e > 0) {
            if (e & 1u) result = result * sq;
            e >>= 1u;
            if (e > 0) sq = sq * sq;
        }
        return result;
    }

    std::string digits() {
        std::string out;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) out.push_back(text_[pos_++]);
        return out;
    }

    unsigned exponent() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') throw ParseError("negative exponent", start);
        std::string d = digits();
        if (d.empty()) throw ParseError("exponent must be a non-negative integer literal", start);
        if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/'))
            throw ParseError("non-integer exponent", start);
        if (d.size() > 4) throw ParseError("exponent too large", start);
        return static_cast<unsigned>(std::stoul(d));
    }

    Algebra base() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Algebra inner = expr();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            mpz_class num(digits(), 10);
            mpz_class den(1);
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                std::string d = digits();
                if (d.empty()) throw ParseError("expected denominator after '/'", pos_);
                den = mpz_class(d, 10);
                if (den == 0) throw ParseError("zero denominator", start);
            }
            if (pos_ < text_.size() && text_[pos_] == '.') throw ParseError("decimal literals are not supported", pos_);
            Rational r(num, den);
            r.canonicalize();
            return builder_.constant(r);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            auto value = builder_.identifier(name);
            if (!value) throw ParseError("unknown identifier '" + std::string(name) + "'", start);
            return *value;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
};

}  // namespace detail

template <class Algebra>
Algebra parse_with(std::string_view text, const ExpressionBuilder<Algebra>& builder) {
    return detail::ExpressionParser<Algebra>(text, builder).parse();
}

/// Prints a sparse term map in the grammar above. Terms are ordered by total
/// exponent (ascending) and then by exponent vector (descending), so "x1"
/// precedes "x2"; factors inside a monomial follow index order.
inline std::string format_terms(const std::map<Exponents, Rational>& terms, const std::vector<std::string>& names) {
    if (terms.empty()) return "0";
    std::vector<const std::pair<const Exponents, Rational>*> order;
    order.reserve(terms.size());
    for (const auto& t : terms) order.push_back(&t);
    auto total = [](const Exponents& e) {
        unsigned s = 0;
        for (auto v : e) s += v;
        return s;
    };
    std::stable_sort(order.begin(), order.end(), [&](auto* a, auto* b) {
        unsigned da = total(a->first), db = total(b->first);
        if (da != db) return da < db;
        return a->first > b->first;
    });

    std::string out;
    bool first = true;
    for (const auto* t : order) {
        const Rational& c = t->second;
        bool negative = sgn(c) < 0;
        Rational mag = abs(c);
        std::string mono;
        for (std::size_t i = 0; i < t->first.size(); ++i) {
            if (t->first[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += names[i];
            if (t->first[i] > 1) mono += "^" + std::to_string(t->first[i]);
        }
        std::string body;
        if (mono.empty())
            body = to_string(mag);
        else if (mag == 1)
            body = mono;
        else
            body = to_string(mag) + "*" + mono;
        if (first)
            out += (negative ? "-" : "") + body;
        else
            out += (negative ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

}  // namespace psm
