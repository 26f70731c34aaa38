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
 * @file scaling_laws.hpp
 * Intensity and noise-depth scalings with the mode number m.
 *
 * Intensity grammar:
 *   constant:E        E
 *   power:a,r         a m^r
 *   linear:a[,c]      a (m - c)
 *   expdecay:a,b      a b^{-m}
 *   logpower:a,r      a log(m) m^r
 *
 * Depth grammar (values rounded up to an integer):
 *   constant:L        L
 *   linear:a          ceil(a m)
 *   sqrt:a            ceil(a sqrt(m))
 */
#pragma once

#include <string>
#include <string_view>

namespace cvplateau {

class IntensityLaw {
  public:
    enum class Kind { Constant, Power, Linear, ExpDecay, LogPower };

    IntensityLaw(Kind kind, double a, double b = 0.0);

    /// Parses the grammar above; throws DomainError naming the bad token.
    static IntensityLaw parse(std::string_view text);

    [[nodiscard]] double operator()(int modes) const;
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double a() const { return a_; }
    [[nodiscard]] double b() const { return b_; }

  private:
    Kind kind_;
    double a_;
    double b_;
};

class DepthLaw {
  public:
    enum class Kind { Constant, Linear, Sqrt };

    DepthLaw(Kind kind, double a);
    static DepthLaw parse(std::string_view text);

    [[nodiscard]] int operator()(int modes) const;
    [[nodiscard]] std::string to_string() const;

  private:
    Kind kind_;
    double a_;
};

} // namespace cvplateau
