#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "martlab/errors.hpp"

namespace martlab {

// All capital values are exact fractions in lowest terms with positive
// denominator; cpp_rational maintains both invariants on every operation
// (it rejects negative denominators outright, so normalize sign first).
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(Int num, Int den) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

inline Rational rat(long long num, long long den = 1) {
    return make_rational(Int(num), Int(den));
}

// 2^exp for possibly negative exp.
inline Rational pow2(long long exp) {
    Int p = Int(1) << static_cast<unsigned>(exp < 0 ? -exp : exp);
    return exp < 0 ? Rational(Int(1), p) : Rational(p);
}

// Canonical "numerator/denominator" form, e.g. "3/2", "1/1", "-5/4".
inline std::string rat_str(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "a/b" or a bare integer "a".
inline std::optional<Rational> rat_parse(std::string_view s) {
    auto is_int = [](std::string_view t) {
        if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            if (!is_int(s)) return std::nullopt;
            return Rational(Int(std::string(s)));
        }
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        Int d{std::string(den)};
        if (d == 0) return std::nullopt;
        return make_rational(Int(std::string(num)), d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline Rational rat_parse_or_throw(std::string_view s) {
    auto q = rat_parse(s);
    if (!q) throw ParseError("bad rational literal: \"" + std::string(s) + "\"");
    return *q;
}

}  // namespace martlab
