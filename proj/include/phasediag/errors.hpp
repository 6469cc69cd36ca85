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

#include <stdexcept>
#include <string>

namespace phasediag {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model document.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Well-formed document with inconsistent content (undeclared names, bad proportions).
class SemanticError : public Error {
public:
    using Error::Error;
};

/// Net outside the supported routing patterns.
class CompileError : public Error {
public:
    using Error::Error;
};

/// Delay-0 dependencies (ignoring left limits) form a cycle.
class CycleError : public Error {
public:
    using Error::Error;
};

/// Missing or invalid parameter binding.
class ConfigError : public Error {
public:
    using Error::Error;
};

class UnboundedError : public Error {
public:
    using Error::Error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An internal consistency check failed.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace phasediag
