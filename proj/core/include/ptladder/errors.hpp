/* Copyright 2026 The ptladder Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptladder {

/// Input that violates a documented precondition (wrong topology, odd cell
/// count for a twisted lattice, out-of-band lead energy, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class for failures of a numerical routine on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The eigensolver hit its iteration cap.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(std::size_t size, std::size_t iteration_cap, const std::string& detail);

    std::size_t matrix_size() const noexcept { return size_; }
    std::size_t iteration_cap() const noexcept { return cap_; }

private:
    std::size_t size_;
    std::size_t cap_;
};

/// The complex rotation angle does not exist (exceptional point or d = 0).
class SingularAngleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The scattering system is singular at the requested energy.
class SingularSystemError : public NumericalError {
public:
    SingularSystemError(std::size_t pivot_cell, const std::string& detail);

    /// Zero-based unit-cell index at which elimination broke down.
    std::size_t pivot_cell() const noexcept { return pivot_cell_; }

private:
    std::size_t pivot_cell_;
};

}  // namespace ptladder
