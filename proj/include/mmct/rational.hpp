#pragma once

#include <boost/rational.hpp>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mmct {

/// Exact rational number. All instance data and model coefficients are kept
/// exact; doubles appear only at the solver boundary.
using Rat = boost::rational<long long>;

inline double to_double(const Rat& r) { return boost::rational_cast<double>(r); }

inline bool is_integer(const Rat& r) { return r.denominator() == 1; }

inline long long to_integer(const Rat& r) {
    if (!is_integer(r)) throw std::invalid_argument("rational is not an integer: " + std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()));
    return r.numerator();
}

inline Rat rat_abs(const Rat& r) { return r < Rat(0) ? -r : r; }

inline long long rat_floor(const Rat& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

/// Nearest integer, ties away from zero.
inline long long rat_round(const Rat& r) {
    long long f = rat_floor(r);
    Rat frac = r - Rat(f);
    return frac * 2 >= Rat(1) ? f + 1 : f;
}

namespace detail {

inline long long pow10_ll(int k) {
    if (k < 0 || k > 18) throw std::out_of_range("decimal exponent out of supported range: " + std::to_string(k));
    long long v = 1;
    for (int i = 0; i < k; ++i) v *= 10;
    return v;
}

} // namespace detail

/// Parses a decimal literal ("42", "-3.25", "1e-06", "2.5e2") into an exact
/// rational. Mantissas are limited to 18 significant digits, which covers
/// shortest-roundtrip printing of doubles.
inline Rat parse_rat(std::string_view text) {
    const std::string input(text);
    const char* p = input.c_str();
    const char* end = p + input.size();

    auto fail = [&]() -> Rat { throw std::invalid_argument("not a number: '" + input + "'"); };

    bool neg = false;
    if (p < end && (*p == '+' || *p == '-')) neg = (*p++ == '-');

    long long mantissa = 0;
    int digits = 0, frac_digits = 0;
    bool seen_digit = false, seen_point = false;
    for (; p < end; ++p) {
        if (*p == '.') {
            if (seen_point) return fail();
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(*p))) {
            seen_digit = true;
            if (digits < 18) {
                mantissa = mantissa * 10 + (*p - '0');
                if (mantissa != 0) ++digits;
                if (seen_point) ++frac_digits;
            } else if (!seen_point) {
                return fail(); // integer part too long to keep exact
            }
            // excess fractional digits beyond 18 significant are dropped
        } else {
            break;
        }
    }
    if (!seen_digit) return fail();

    int exponent = 0;
    if (p < end && (*p == 'e' || *p == 'E')) {
        ++p;
        bool eneg = false;
        if (p < end && (*p == '+' || *p == '-')) eneg = (*p++ == '-');
        if (p == end || !std::isdigit(static_cast<unsigned char>(*p))) return fail();
        int ev = 0;
        for (; p < end && std::isdigit(static_cast<unsigned char>(*p)); ++p) {
            ev = ev * 10 + (*p - '0');
            if (ev > 1000) return fail();
        }
        exponent = eneg ? -ev : ev;
    }
    if (p != end) return fail();

    int net = exponent - frac_digits;
    while (net < -18 && mantissa != 0) { mantissa /= 10; ++net; } // drop sub-1e-18 digits
    if (mantissa == 0) return Rat(0);
    Rat value = net >= 0 ? Rat(mantissa) * Rat(detail::pow10_ll(net))
                         : Rat(mantissa, detail::pow10_ll(-net));
    return neg ? -value : value;
}

/// Renders a rational in decimal. The expansion is exact whenever the
/// denominator divides a power of ten; otherwise falls back to 17 significant
/// digits (only reachable for values that never occur in exported models).
inline std::string to_decimal(const Rat& r) {
    long long num = r.numerator(), den = r.denominator();
    if (den == 1) return std::to_string(num);

    long long d = den;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    int k = twos > fives ? twos : fives;
    if (d == 1 && k <= 18) {
        __int128 scaled = static_cast<__int128>(num) * detail::pow10_ll(k) / den;
        bool neg = scaled < 0;
        if (neg) scaled = -scaled;
        std::string digits;
        if (scaled == 0) digits = "0";
        while (scaled > 0) { digits.push_back(static_cast<char>('0' + static_cast<int>(scaled % 10))); scaled /= 10; }
        std::string intpart(digits.rbegin(), digits.rend());
        while (static_cast<int>(intpart.size()) <= k) intpart.insert(intpart.begin(), '0');
        std::string whole = intpart.substr(0, intpart.size() - k);
        std::string frac = intpart.substr(intpart.size() - k);
        while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
        return (neg ? "-" : "") + whole + "." + frac;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", to_double(r));
    return buf;
}

} // namespace mmct
