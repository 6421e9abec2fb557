/*
 * Copyright 2026 The hypheat Authors
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

#ifndef HYPHEAT_ERRORS_HPP
#define HYPHEAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hypheat {

/// Bad arguments from the caller: even n, non-positive t, malformed flags.
/// The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A ladder level beyond what a table or expansion budget holds.
class LevelOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// An exact structural claim failed during construction (e.g. a negative
/// coefficient in an alpha polynomial). Always fatal; never relaxed.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested time lies at or past the extinction time of a shrinking flow.
class ExtinctFlow : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace hypheat

#endif
