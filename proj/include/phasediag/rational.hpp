/*
 * Copyright 2026 The phasediag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phasediag {

using Rational = mpq_class;
using Integer = mpz_class;
using Vector = std::vector<Rational>;

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "3", "-2/5", "0.4", "1.25e-2" exactly. Returns nullopt on junk.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
    while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;

    bool negative = false;
    std::size_t pos = 0;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::string& out) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            out.push_back(text[pos]);
            ++pos;
        }
        return pos > start;
    };

    std::string int_part;
    std::string frac_part;
    bool have_int = digits(int_part);
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        std::string den;
        if (!have_int || !digits(den) || pos != text.size()) return std::nullopt;
        Integer d(den);
        if (d == 0) return std::nullopt;
        Rational q{Integer(int_part), d};
        q.canonicalize();
        return negative ? Rational(-q) : q;
    }
    bool have_frac = false;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        have_frac = digits(frac_part);
    }
    if (!have_int && !have_frac) return std::nullopt;
    long exponent = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_negative = text[pos] == '-';
            ++pos;
        }
        std::string exp_digits;
        if (!digits(exp_digits) || exp_digits.size() > 6) return std::nullopt;
        exponent = std::stol(exp_digits);
        if (exp_negative) exponent = -exponent;
    }
    if (pos != text.size()) return std::nullopt;

    Integer mantissa(int_part.empty() && frac_part.empty() ? std::string("0") : int_part + frac_part);
    exponent -= static_cast<long>(frac_part.size());
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational q = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
}

/// "p/q", or "p" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline int sign(const Rational& q) { return sgn(q); }

inline Rational abs_value(const Rational& q) { return abs(q); }

/// Scales a row to coprime integers with the first nonzero entry kept in sign.
/// Returns the positive multiplier used.
inline Rational primitive_scale(const std::vector<Rational>& row) {
    Integer lcm_den = 1;
    for (const auto& q : row) {
        if (q == 0) continue;
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), q.get_den_mpz_t());
    }
    Integer gcd_num = 0;
    for (const auto& q : row) {
        if (q == 0) continue;
        Integer scaled = abs(q.get_num()) * (lcm_den / q.get_den());
        mpz_gcd(gcd_num.get_mpz_t(), gcd_num.get_mpz_t(), scaled.get_mpz_t());
    }
    if (gcd_num == 0) return Rational(1);
    Rational scale(lcm_den, gcd_num);
    scale.canonicalize();
    return scale;
}

} // namespace phasediag
