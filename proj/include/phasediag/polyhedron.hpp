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

#include "phasediag/rational.hpp"

#include <cassert>
#include <string>
#include <vector>

namespace phasediag {

/// coeffs·x (= or ≤) rhs
struct Constraint {
    Vector coeffs;
    Rational rhs;

    Rational evaluate(const Vector& x) const {
        assert(x.size() == coeffs.size());
        Rational acc = 0;
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            if (coeffs[j] != 0) acc += coeffs[j] * x[j];
        return acc;
    }

    bool is_trivial() const {
        for (const auto& c : coeffs)
            if (c != 0) return false;
        return true;
    }

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Closed convex polyhedron {x : E x = e, G x ≤ h} over named variables.
struct HPolyhedron {
    std::vector<std::string> variables;
    std::vector<Constraint> eq_rows;
    std::vector<Constraint> ineq_rows;

    HPolyhedron() = default;
    explicit HPolyhedron(std::vector<std::string> vars) : variables(std::move(vars)) {}

    std::size_t dim() const { return variables.size(); }

    void add_eq(Vector coeffs, Rational rhs) {
        assert(coeffs.size() == dim());
        eq_rows.push_back({std::move(coeffs), std::move(rhs)});
    }
    void add_ineq(Vector coeffs, Rational rhs) {
        assert(coeffs.size() == dim());
        ineq_rows.push_back({std::move(coeffs), std::move(rhs)});
    }

    /// Unit coefficient vector for variable j.
    Vector unit(std::size_t j, const Rational& value = 1) const {
        Vector v(dim(), Rational(0));
        v[j] = value;
        return v;
    }

    std::ptrdiff_t index_of(const std::string& name) const {
        for (std::size_t j = 0; j < variables.size(); ++j)
            if (variables[j] == name) return static_cast<std::ptrdiff_t>(j);
        return -1;
    }

    bool contains(const Vector& x) const {
        for (const auto& r : eq_rows)
            if (r.evaluate(x) != r.rhs) return false;
        for (const auto& r : ineq_rows)
            if (r.evaluate(x) > r.rhs) return false;
        return true;
    }

    /// Membership in {E x = e, G x < h}: relative interior when no inequality
    /// is an implicit equality.
    bool strictly_satisfies(const Vector& x) const {
        for (const auto& r : eq_rows)
            if (r.evaluate(x) != r.rhs) return false;
        for (const auto& r : ineq_rows)
            if (r.evaluate(x) >= r.rhs) return false;
        return true;
    }

    /// Intersection with another polyhedron over the same variables.
    HPolyhedron intersect(const HPolyhedron& other) const {
        assert(other.variables == variables);
        HPolyhedron out = *this;
        out.eq_rows.insert(out.eq_rows.end(), other.eq_rows.begin(), other.eq_rows.end());
        out.ineq_rows.insert(out.ineq_rows.end(), other.ineq_rows.begin(), other.ineq_rows.end());
        return out;
    }
};

} // namespace phasediag
