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

#ifndef BSCE_BEAMSPACE_HPP
#define BSCE_BEAMSPACE_HPP

#include "common.hpp"

#include <algorithm>
#include <cmath>

namespace bsce
{
    // Index into the K-point angle grid {-1 + 2c/K : c = 0..K-1}.
    struct GridIndex
    {
        long value = 0;

        double angle(long k) const { return -1.0 + 2.0 * static_cast<double>(value) / static_cast<double>(k); }
        friend bool operator==(const GridIndex &, const GridIndex &) = default;
    };

    inline double grid_angle(long index, long k)
    {
        return GridIndex{index}.angle(k);
    }

    /*!MD
    # steering_vector
    Uniform linear array response for normalized spatial angle `theta`:
    entry m is exp(-j*pi*theta*m)/sqrt(n), m = 0..n-1.

    The vector is 2-periodic in `theta`; values outside [-1, 1] are accepted
    and alias onto the principal range. Throws `InvalidDimension` for n < 1.
    MD!*/
    inline CVector steering_vector(long n, double theta)
    {
        if (n < 1)
            throw InvalidDimension("steering_vector: antenna count must be >= 1");
        CVector a(n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (long m = 0; m < n; ++m)
            a(m) = scale * std::exp(-j_unit * (pi * theta * static_cast<double>(m)));
        return a;
    }

    // D(n, k): column c is steering_vector(n, -1 + 2c/k).
    struct SamplingMatrix
    {
        long n = 0;
        long k = 0;
        CMatrix columns;
    };

    inline SamplingMatrix sampling_matrix(long n, long k)
    {
        if (n < 1)
            throw InvalidDimension("sampling_matrix: antenna count must be >= 1");
        if (k < n)
            throw InvalidDimension("sampling_matrix: oversampling k must be >= n");
        SamplingMatrix d{n, k, CMatrix(n, k)};
        for (long c = 0; c < k; ++c)
            d.columns.col(c) = steering_vector(n, grid_angle(c, k));
        return d;
    }

    // round(k*(theta+1)/2) with ties away from zero, clamped to [0, k-1].
    inline GridIndex quantize_angle(double theta, long k)
    {
        if (k < 1)
            throw InvalidDimension("quantize_angle: grid size must be >= 1");
        if (!(theta >= -1.0 && theta <= 1.0))
            throw DomainError("quantize_angle: theta must lie in [-1, 1]");
        const long idx = std::lround(static_cast<double>(k) * (theta + 1.0) / 2.0);
        return GridIndex{std::clamp(idx, 0L, k - 1)};
    }

    inline long wrap_index(long index, long k)
    {
        const long r = index % k;
        return r < 0 ? r + k : r;
    }

    // Unclamped grid coordinate of an arbitrary (possibly aliased) angle.
    // Used for search regions that straddle the +-1 seam.
    inline long unwrapped_grid_coordinate(double theta, long k)
    {
        return std::lround(static_cast<double>(k) * (theta + 1.0) / 2.0);
    }

    // Map theta onto [-1, 1).
    inline double wrap_angle(double theta)
    {
        double t = std::fmod(theta + 1.0, 2.0);
        if (t < 0.0)
            t += 2.0;
        return t - 1.0;
    }

    // Distance between two normalized angles on the 2-periodic circle.
    inline double angle_distance(double a, double b)
    {
        return std::abs(wrap_angle(a - b));
    }

    // dn^H * h * dm
    inline CMatrix beamspace_transform(const CMatrix &h, const SamplingMatrix &dn, const SamplingMatrix &dm)
    {
        if (dn.n != h.rows() || dm.n != h.cols())
            throw InvalidDimension("beamspace_transform: sampling matrices do not match channel dimensions");
        if (dn.k != dm.k)
            throw InvalidDimension("beamspace_transform: sampling matrices must share the grid size");
        return dn.columns.adjoint() * h * dm.columns;
    }
}

#endif
