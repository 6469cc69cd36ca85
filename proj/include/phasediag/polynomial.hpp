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

// Univariate polynomials over the rationals, coefficients from degree 0 up,
// with Sturm-sequence root counting.

#include "phasediag/matrix.hpp"
#include "phasediag/rational.hpp"

#include <vector>

namespace phasediag {

using Polynomial = std::vector<Rational>;

inline void trim(Polynomial& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline long degree(const Polynomial& p) { return static_cast<long>(p.size()) - 1; }

inline Rational evaluate(const Polynomial& p, const Rational& x) {
    Rational acc = 0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
    return acc;
}

inline Polynomial derivative(const Polynomial& p) {
    Polynomial d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
    trim(d);
    return d;
}

/// Remainder of a / b (b nonzero).
inline Polynomial remainder(Polynomial a, const Polynomial& b) {
    trim(a);
    const long db = degree(b);
    while (degree(a) >= db && !a.empty()) {
        Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= f * b[k];
        trim(a);
    }
    return a;
}

inline Polynomial quotient(Polynomial a, const Polynomial& b) {
    trim(a);
    if (degree(a) < degree(b)) return {};
    Polynomial q(a.size() - b.size() + 1, Rational(0));
    while (degree(a) >= degree(b) && !a.empty()) {
        Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= f * b[k];
        trim(a);
    }
    trim(q);
    return q;
}

inline Polynomial monic_gcd(Polynomial a, Polynomial b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Polynomial r = remainder(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

/// p / gcd(p, p'): same roots, all simple.
inline Polynomial square_free_part(const Polynomial& p) {
    Polynomial g = monic_gcd(p, derivative(p));
    if (degree(g) <= 0) return p;
    return quotient(p, g);
}

inline std::vector<Polynomial> sturm_sequence(const Polynomial& p) {
    std::vector<Polynomial> seq{p, derivative(p)};
    while (!seq.back().empty()) {
        Polynomial r = remainder(seq[seq.size() - 2], seq.back());
        for (auto& c : r) c = -c;
        if (r.empty()) break;
        seq.push_back(std::move(r));
    }
    if (seq.back().empty()) seq.pop_back();
    return seq;
}

inline std::size_t sign_changes(const std::vector<int>& signs) {
    std::size_t changes = 0;
    int last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

inline std::size_t sign_changes_at(const std::vector<Polynomial>& seq, const Rational& x) {
    std::vector<int> s;
    for (const auto& p : seq) s.push_back(sgn(evaluate(p, x)));
    return sign_changes(s);
}

inline std::size_t sign_changes_at_infinity(const std::vector<Polynomial>& seq) {
    std::vector<int> s;
    for (const auto& p : seq) s.push_back(p.empty() ? 0 : sgn(p.back()));
    return sign_changes(s);
}

/// Distinct real roots in the half-open interval (a, b].
inline std::size_t count_roots(const Polynomial& p, const Rational& a, const Rational& b) {
    Polynomial q = square_free_part(p);
    if (degree(q) <= 0) return 0;
    auto seq = sturm_sequence(q);
    std::size_t va = sign_changes_at(seq, a);
    std::size_t vb = sign_changes_at(seq, b);
    // a root at a itself is not counted by va - vb
    return va >= vb ? va - vb : 0;
}

/// Distinct real roots in (a, +inf).
inline std::size_t count_roots_above(const Polynomial& p, const Rational& a) {
    Polynomial q = square_free_part(p);
    if (degree(q) <= 0) return 0;
    auto seq = sturm_sequence(q);
    std::size_t va = sign_changes_at(seq, a);
    std::size_t vi = sign_changes_at_infinity(seq);
    return va >= vi ? va - vi : 0;
}

/// det(x I - A), by the Faddeev-LeVerrier recurrence.
inline Polynomial characteristic_polynomial(const RationalMatrix& a) {
    const std::size_t n = a.rows();
    Polynomial c(n + 1, Rational(0));
    c[n] = 1;
    RationalMatrix m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        RationalMatrix am = a * m;
        for (std::size_t i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
        m = am;
        RationalMatrix t = a * m;
        Rational tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += t(i, i);
        c[n - k] = -tr / static_cast<long>(k);
    }
    return c;
}

/// Polynomial through (x_k, y_k), by Newton divided differences.
inline Polynomial interpolate(const Vector& xs, const Vector& ys) {
    const std::size_t n = xs.size();
    Vector dd = ys;
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t k = n - 1; k >= level; --k) {
            dd[k] = (dd[k] - dd[k - 1]) / (xs[k] - xs[k - level]);
            if (k == level) break;
        }
    Polynomial p{dd[n - 1]};
    for (std::size_t k = n - 1; k-- > 0;) {
        // p = p * (x - xs[k]) + dd[k]
        Polynomial next(p.size() + 1, Rational(0));
        for (std::size_t j = 0; j < p.size(); ++j) {
            next[j + 1] += p[j];
            next[j] -= p[j] * xs[k];
        }
        next[0] += dd[k];
        p = std::move(next);
    }
    trim(p);
    return p;
}

} // namespace phasediag
