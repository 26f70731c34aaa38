// Copyright 2026 The cvplateau Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file errors.hpp
 * Exception types shared by every module.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace cvplateau {

/// Operand shapes disagree (mode counts, matrix sizes).
class DimensionError : public std::invalid_argument {
  public:
    explicit DimensionError(const std::string &what)
        : std::invalid_argument(what) {}
};

/// An argument is outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
  public:
    explicit DomainError(const std::string &what)
        : std::invalid_argument(what) {}
};

/// A computation produced a non-finite value where a finite one is required.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string &what)
        : std::runtime_error(what) {}
};

} // namespace cvplateau
