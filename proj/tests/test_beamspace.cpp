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

#include <bsce/beamspace.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bsce;

namespace
{
    double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

    // Closed-form Dirichlet magnitude |alpha(n,a)^H alpha(n,b)|.
    double dirichlet(long n, double a, double b)
    {
        const double x = pi * (a - b) / 2.0;
        return std::abs(std::sin(static_cast<double>(n) * x)) / (static_cast<double>(n) * std::abs(std::sin(x)));
    }
}

TEST(SteeringVector, SingleAntenna)
{
    const CVector a = steering_vector(1, 0.5);
    ASSERT_EQ(a.size(), 1);
    EXPECT_NEAR(std::abs(a(0) - Complex(1.0, 0.0)), 0.0, 1e-15);
}

TEST(SteeringVector, ZeroAngleIsFlat)
{
    const CVector a = steering_vector(2, 0.0);
    EXPECT_NEAR(std::abs(a(0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a(1) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(SteeringVector, EndfireAlternatesSign)
{
    const CVector a = steering_vector(4, 1.0);
    const double expect[4] = {0.5, -0.5, 0.5, -0.5};
    for (int m = 0; m < 4; ++m)
        EXPECT_NEAR(std::abs(a(m) - Complex(expect[m], 0.0)), 0.0, 1e-15);
}

TEST(SteeringVector, RejectsEmptyArray)
{
    EXPECT_THROW(steering_vector(0, 0.0), InvalidDimension);
}

TEST(SteeringVector, UnitNormAndDirichletInnerProduct)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i)
    {
        const long n = 1 + i % 37;
        const double a = u(rng);
        const double b = u(rng);
        const CVector va = steering_vector(n, a);
        const CVector vb = steering_vector(n, b);
        EXPECT_NEAR(va.norm(), 1.0, 1e-12);
        if (std::abs(std::sin(pi * (a - b) / 2.0)) > 1e-6)
            EXPECT_NEAR(std::abs(va.dot(vb)), dirichlet(n, a, b), 1e-10);
    }
}

TEST(SamplingMatrix, TwoByTwoColumns)
{
    const auto d = sampling_matrix(2, 2);
    CMatrix expect(2, 2);
    expect << 1.0, 1.0, -1.0, 1.0;
    expect /= std::sqrt(2.0);
    EXPECT_LT(max_abs(d.columns - expect), 1e-15);
}

TEST(SamplingMatrix, GramIsScaledIdentity)
{
    for (long n = 1; n <= 16; ++n)
        for (long k = n; k <= 40; k += 3)
        {
            const auto d = sampling_matrix(n, k);
            const CMatrix g = d.columns * d.columns.adjoint();
            const CMatrix expect = (static_cast<double>(k) / static_cast<double>(n)) * CMatrix::Identity(n, n);
            EXPECT_LT(max_abs(g - expect), 1e-10) << "n=" << n << " k=" << k;
        }
}

TEST(SamplingMatrix, ReferenceDimensions)
{
    for (long n : {64L, 16L})
    {
        const auto d = sampling_matrix(n, 1024);
        const CMatrix g = d.columns * d.columns.adjoint();
        EXPECT_LT(max_abs(g - (1024.0 / static_cast<double>(n)) * CMatrix::Identity(n, n)), 1e-10);
    }
    const auto d = sampling_matrix(2, 4);
    EXPECT_LT(max_abs(d.columns * d.columns.adjoint() - 2.0 * CMatrix::Identity(2, 2)), 1e-14);
}

TEST(SamplingMatrix, RejectsUndersampling)
{
    EXPECT_THROW(sampling_matrix(8, 4), InvalidDimension);
}

TEST(QuantizeAngle, Examples)
{
    EXPECT_EQ(quantize_angle(0.0, 1024).value, 512);
    EXPECT_EQ(quantize_angle(-1.0, 1024).value, 0);
    EXPECT_EQ(quantize_angle(1.0, 1024).value, 1023);
}

TEST(QuantizeAngle, RejectsOutOfRange)
{
    EXPECT_THROW(quantize_angle(1.0000001, 64), DomainError);
    EXPECT_THROW(quantize_angle(-1.5, 64), DomainError);
    EXPECT_THROW(quantize_angle(std::nan(""), 64), DomainError);
}

TEST(QuantizeAngle, IdempotentOnGridAndMonotone)
{
    for (long k : {7L, 64L, 1024L})
    {
        for (long c = 0; c < k; ++c)
            EXPECT_EQ(quantize_angle(grid_angle(c, k), k).value, c);
        long prev = 0;
        for (int i = 0; i <= 5000; ++i)
        {
            const double th = -1.0 + 2.0 * i / 5000.0;
            const long q = quantize_angle(th, k).value;
            EXPECT_GE(q, prev);
            prev = q;
        }
    }
}

TEST(QuantizeAngle, NearestGridPoint)
{
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0 - 2.0 / 256.0);
    for (int i = 0; i < 1000; ++i)
    {
        const double th = u(rng);
        long best = 0;
        for (long c = 1; c < 256; ++c)
            if (std::abs(grid_angle(c, 256) - th) < std::abs(grid_angle(best, 256) - th))
                best = c;
        EXPECT_EQ(quantize_angle(th, 256).value, best);
    }
}

TEST(AngleDistance, WrapsAcrossSeam)
{
    EXPECT_NEAR(angle_distance(-1.0, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(angle_distance(0.9, -0.9), 0.2, 1e-12);
    EXPECT_NEAR(angle_distance(0.3, -0.1), 0.4, 1e-12);
    EXPECT_NEAR(angle_distance(0.0, 1.0), 1.0, 1e-15);
}

TEST(BeamspaceTransform, IdentityChannel)
{
    const auto d = sampling_matrix(2, 2);
    const CMatrix b = beamspace_transform(CMatrix::Identity(2, 2), d, d);
    EXPECT_LT(max_abs(b - d.columns.adjoint() * d.columns), 1e-15);
}

TEST(BeamspaceTransform, PeakAtQuantizedAngles)
{
    auto argmax = [](const CMatrix &m)
    {
        Eigen::Index r = 0, c = 0;
        m.cwiseAbs().maxCoeff(&r, &c);
        return std::pair<long, long>(r, c);
    };
    {
        const CMatrix h = steering_vector(2, 0.0) * steering_vector(2, 0.0).adjoint();
        const auto d = sampling_matrix(2, 2);
        const auto [p, q] = argmax(beamspace_transform(h, d, d));
        EXPECT_EQ(p, quantize_angle(0.0, 2).value);
        EXPECT_EQ(q, quantize_angle(0.0, 2).value);
    }
    {
        const CMatrix h = steering_vector(4, -1.0) * steering_vector(4, -1.0).adjoint();
        const auto d = sampling_matrix(4, 8);
        const auto [p, q] = argmax(beamspace_transform(h, d, d));
        EXPECT_EQ(p, 0);
        EXPECT_EQ(q, 0);
    }
}

TEST(BeamspaceTransform, RejectsMismatch)
{
    EXPECT_THROW(beamspace_transform(CMatrix::Zero(3, 2), sampling_matrix(2, 4), sampling_matrix(2, 4)),
                 InvalidDimension);
    EXPECT_THROW(beamspace_transform(CMatrix::Zero(2, 2), sampling_matrix(2, 4), sampling_matrix(2, 8)),
                 InvalidDimension);
}
