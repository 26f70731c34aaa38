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
#include "cvplateau/scaling_laws.hpp"

#include "cvplateau/errors.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

namespace cvplateau {

namespace {

std::vector<double> parse_params(std::string_view text, std::string_view law) {
    std::vector<double> out;
    if (text.empty()) {
        return out;
    }
    while (true) {
        const auto comma = text.find(',');
        const auto tok = text.substr(0, comma);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
            throw DomainError("law '" + std::string(law) + "': bad number '" +
                              std::string(tok) + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, ptr};
}

std::pair<std::string_view, std::vector<double>> split_law(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        return {text, {}};
    }
    return {text.substr(0, colon), parse_params(text.substr(colon + 1), text)};
}

void require_count(const std::vector<double> &p, std::size_t lo, std::size_t hi,
                   std::string_view text) {
    if (p.size() < lo || p.size() > hi) {
        throw DomainError("law '" + std::string(text) + "' has " +
                          std::to_string(p.size()) + " parameters");
    }
}

} // namespace

IntensityLaw::IntensityLaw(Kind kind, double a, double b)
    : kind_(kind), a_(a), b_(b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("intensity law parameters must be finite");
    }
    if (kind == Kind::Constant && a < 0.0) {
        throw DomainError("constant intensity must be nonnegative");
    }
    if (kind != Kind::Constant && a <= 0.0) {
        throw DomainError("intensity law coefficient a must be positive");
    }
    if (kind == Kind::ExpDecay && b <= 1.0) {
        throw DomainError("expdecay base b must exceed 1");
    }
}

IntensityLaw IntensityLaw::parse(std::string_view text) {
    const auto [name, p] = split_law(text);
    if (name == "constant") {
        require_count(p, 1, 1, text);
        return {Kind::Constant, p[0]};
    }
    if (name == "power") {
        require_count(p, 2, 2, text);
        return {Kind::Power, p[0], p[1]};
    }
    if (name == "linear") {
        require_count(p, 1, 2, text);
        return {Kind::Linear, p[0], p.size() > 1 ? p[1] : 0.0};
    }
    if (name == "expdecay") {
        require_count(p, 2, 2, text);
        return {Kind::ExpDecay, p[0], p[1]};
    }
    if (name == "logpower") {
        require_count(p, 2, 2, text);
        return {Kind::LogPower, p[0], p[1]};
    }
    throw DomainError("unknown intensity law '" + std::string(name) + "'");
}

double IntensityLaw::operator()(int modes) const {
    const double m = modes;
    double e = 0.0;
    switch (kind_) {
    case Kind::Constant:
        e = a_;
        break;
    case Kind::Power:
        e = a_ * std::pow(m, b_);
        break;
    case Kind::Linear:
        e = a_ * (m - b_);
        break;
    case Kind::ExpDecay:
        e = a_ * std::pow(b_, -m);
        break;
    case Kind::LogPower:
        e = a_ * std::log(m) * std::pow(m, b_);
        break;
    }
    if (!(e >= 0.0)) {
        throw DomainError("intensity law " + to_string() + " is negative at m = " +
                          std::to_string(modes));
    }
    return e;
}

std::string IntensityLaw::to_string() const {
    switch (kind_) {
    case Kind::Constant:
        return "constant:" + fmt(a_);
    case Kind::Power:
        return "power:" + fmt(a_) + "," + fmt(b_);
    case Kind::Linear:
        return b_ == 0.0 ? "linear:" + fmt(a_) : "linear:" + fmt(a_) + "," + fmt(b_);
    case Kind::ExpDecay:
        return "expdecay:" + fmt(a_) + "," + fmt(b_);
    case Kind::LogPower:
        return "logpower:" + fmt(a_) + "," + fmt(b_);
    }
    return {};
}

DepthLaw::DepthLaw(Kind kind, double a) : kind_(kind), a_(a) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
        throw DomainError("depth law coefficient must be finite and nonnegative");
    }
}

DepthLaw DepthLaw::parse(std::string_view text) {
    const auto [name, p] = split_law(text);
    require_count(p, 1, 1, text);
    if (name == "constant") {
        return {Kind::Constant, p[0]};
    }
    if (name == "linear") {
        return {Kind::Linear, p[0]};
    }
    if (name == "sqrt") {
        return {Kind::Sqrt, p[0]};
    }
    throw DomainError("unknown depth law '" + std::string(name) + "'");
}

int DepthLaw::operator()(int modes) const {
    switch (kind_) {
    case Kind::Constant:
        return static_cast<int>(std::ceil(a_));
    case Kind::Linear:
        return static_cast<int>(std::ceil(a_ * modes));
    case Kind::Sqrt:
        return static_cast<int>(std::ceil(a_ * std::sqrt(static_cast<double>(modes))));
    }
    return 0;
}

std::string DepthLaw::to_string() const {
    switch (kind_) {
    case Kind::Constant:
        return "constant:" + fmt(a_);
    case Kind::Linear:
        return "linear:" + fmt(a_);
    case Kind::Sqrt:
        return "sqrt:" + fmt(a_);
    }
    return {};
}

} // namespace cvplateau
