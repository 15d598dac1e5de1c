#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace isingmdp {

// Exact rational scalar used wherever the toolkit promises exact equality
// (kernel tables, closed-form values, policy evaluation).
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long long num, long long den = 1) { return Rat(num, den); }

// Parses "p/q", an integer, or a finite decimal ("0.85" -> 17/20).
inline Rat parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("rational with zero denominator: " + text);
        return Rat(num, den);
    }
    std::string body = text;
    bool negative = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        negative = body[0] == '-';
        body.erase(0, 1);
    }
    BigInt num = 0, den = 1;
    bool seen_dot = false, seen_digit = false;
    for (char c : body) {
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("malformed number: " + text);
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw std::invalid_argument("malformed number: " + text);
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        seen_digit = true;
    }
    if (!seen_digit) throw std::invalid_argument("malformed number: " + text);
    Rat out(num, den);
    return negative ? Rat(-out) : out;
}

inline std::string to_string(const Rat& r) {
    return r.str();
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

}  // namespace isingmdp
