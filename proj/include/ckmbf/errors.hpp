// SPDX-License-Identifier: Apache-2.0
//
// ckmbf: environment-aware hybrid beamforming with channel knowledge maps
// Copyright (C) 2026 The ckmbf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckm
{

// Caller broke a documented precondition (shape mismatch, non-Hermitian input, bad range).
class ContractViolation : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A matrix that must be inverted (or inverse-square-rooted) is numerically singular.
class SingularityError : public std::runtime_error
{
public:
    SingularityError(const std::string &what, double offending_eigenvalue)
        : std::runtime_error(what), eigenvalue_(offending_eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

// An exhaustive search or dictionary would exceed its configured size budget.
class BudgetExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Text input (CSV, map file, config) could not be parsed. Line is 1-based, 0 if unknown.
class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace ckm
