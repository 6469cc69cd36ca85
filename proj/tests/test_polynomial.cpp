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
#include "phasediag/polynomial.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace phasediag;

namespace {

// coefficients, lowest degree first
Polynomial from_roots(const std::vector<Rational>& roots) {
    Polynomial p{1};
    for (const auto& r : roots) {
        Polynomial next(p.size() + 1, Rational(0));
        for (std::size_t j = 0; j < p.size(); ++j) {
            next[j + 1] += p[j];
            next[j] -= p[j] * r;
        }
        p = next;
    }
    return p;
}

} // namespace

TEST(Polynomial, EvaluateAndDerivative) {
    Polynomial p{1, -3, 2};  // 2x^2 - 3x + 1
    EXPECT_EQ(evaluate(p, Rational(1)), 0);
    EXPECT_EQ(evaluate(p, Rational(1, 2)), 0);
    EXPECT_EQ(derivative(p), (Polynomial{-3, 4}));
}

TEST(Polynomial, RootCountingOnIntervals) {
    auto p = from_roots({Rational(-2), Rational(1, 3), Rational(1), Rational(5)});
    EXPECT_EQ(count_roots(p, Rational(0), Rational(1)), 2u);
    EXPECT_EQ(count_roots(p, Rational(1), Rational(4)), 0u);
    EXPECT_EQ(count_roots(p, Rational(-3), Rational(10)), 4u);
    EXPECT_EQ(count_roots_above(p, Rational(1)), 1u);
    EXPECT_EQ(count_roots_above(p, Rational(0)), 3u);
}

TEST(Polynomial, RepeatedRootsCountOnce) {
    auto p = from_roots({Rational(2), Rational(2), Rational(2), Rational(-1)});
    EXPECT_EQ(count_roots(p, Rational(-5), Rational(5)), 2u);
    EXPECT_EQ(degree(square_free_part(p)), 2);
}

TEST(Polynomial, NoRealRoots) {
    Polynomial p{1, 0, 1};  // x^2 + 1
    EXPECT_EQ(count_roots_above(p, Rational(-100)), 0u);
}

TEST(Polynomial, CharacteristicPolynomialOfTriangular) {
    auto a = RationalMatrix::from_rows({{2, 7, 1}, {0, -1, 4}, {0, 0, Rational(1, 2)}});
    EXPECT_EQ(characteristic_polynomial(a), from_roots({Rational(2), Rational(-1), Rational(1, 2)}));
}

TEST(Polynomial, CharacteristicPolynomialMatchesDeterminant) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-4, 4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
        RationalMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = d(rng);
        auto chi = characteristic_polynomial(a);
        for (int x = -3; x <= 3; ++x) {
            RationalMatrix m = RationalMatrix::identity(n).scaled(Rational(x)) - a;
            EXPECT_EQ(evaluate(chi, Rational(x)), determinant(m));
        }
    }
}

TEST(Polynomial, InterpolationRecoversCoefficients) {
    Polynomial p{Rational(1, 2), -3, 0, 7};
    Vector xs, ys;
    for (int k = 0; k < 6; ++k) {
        xs.push_back(Rational(k, 3));
        ys.push_back(evaluate(p, xs.back()));
    }
    EXPECT_EQ(interpolate(xs, ys), p);
}
