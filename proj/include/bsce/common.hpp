// SPDX-License-Identifier: Apache-2.0
//
// bsce - beamspace channel estimation for hybrid mmWave massive MIMO
// Copyright (C) 2026 The bsce authors
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

#ifndef BSCE_COMMON_HPP
#define BSCE_COMMON_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bsce
{
    using Complex = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RVector = Eigen::VectorXd;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr Complex j_unit{0.0, 1.0};

    // Error hierarchy. Everything derives from std::invalid_argument or
    // std::runtime_error so callers may catch broadly.
    class InvalidDimension : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    class ConfigError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class MetricError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    enum class Scheme
    {
        IA,
        SZO,
        CZO,
        RandomBaseline
    };

    inline std::string to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::IA:
            return "ia";
        case Scheme::SZO:
            return "szo";
        case Scheme::CZO:
            return "czo";
        case Scheme::RandomBaseline:
            return "random";
        }
        return "unknown";
    }

    inline Scheme scheme_from_string(const std::string &s)
    {
        if (s == "ia" || s == "IA")
            return Scheme::IA;
        if (s == "szo" || s == "SZO")
            return Scheme::SZO;
        if (s == "czo" || s == "CZO")
            return Scheme::CZO;
        if (s == "random" || s == "RandomBaseline")
            return Scheme::RandomBaseline;
        throw ConfigError("unknown scheme '" + s + "'");
    }

    // Deterministic seed mixing (splitmix64 finalizer). Used to derive
    // independent per-trial/per-user streams from one experiment seed.
    inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b)
    {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    template <typename... Ts>
    std::uint64_t derive_seed(std::uint64_t base, Ts... parts)
    {
        std::uint64_t s = base;
        ((s = mix_seed(s, static_cast<std::uint64_t>(parts))), ...);
        return s;
    }
}

#endif
