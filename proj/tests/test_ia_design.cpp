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

#include <bsce/ia_design.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bsce;

namespace
{
    double max_abs(const CMatrix &m) { return m.cwiseAbs().maxCoeff(); }

    // Nearest grid level by exhaustive circular comparison.
    Complex nearest_on_grid(Complex z, const PhaseShifterGrid &g)
    {
        if (z == Complex(0.0, 0.0))
            return Complex(g.magnitude, 0.0);
        const double ph = std::arg(z);
        double best = 1e9;
        Complex out;
        for (double lv : g.levels())
        {
            const double d = std::abs(std::remainder(ph - pi * lv, 2.0 * pi));
            if (d < best - 1e-12)
            {
                best = d;
                out = std::polar(g.magnitude, pi * lv);
            }
        }
        return out;
    }

    CMatrix random_complex(long r, long c, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> nd;
        CMatrix m(r, c);
        for (long j = 0; j < c; ++j)
            for (long i = 0; i < r; ++i)
                m(i, j) = Complex(nd(rng), nd(rng));
        return m;
    }

    bool all_on_grid(const CMatrix &m, const PhaseShifterGrid &g)
    {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                if (!g.contains(m(i, j), 1e-12))
                    return false;
        return true;
    }

    double ia_error(const CMatrix &gram) { return identity_approximation_error(gram); }
}

TEST(PhaseShifterGrid, LevelsUniform)
{
    const PhaseShifterGrid g(3, 1.0);
    const auto lv = g.levels();
    ASSERT_EQ(lv.size(), 8u);
    EXPECT_DOUBLE_EQ(lv.front(), -1.0);
    for (std::size_t i = 1; i < lv.size(); ++i)
        EXPECT_NEAR(lv[i] - lv[i - 1], 0.25, 1e-15);
    EXPECT_THROW(PhaseShifterGrid(0, 1.0), InvalidDimension);
    EXPECT_THROW(PhaseShifterGrid(4, 0.0), DomainError);
}

TEST(QuantizeAnalog, Examples)
{
    const PhaseShifterGrid g2(2, 1.0);
    CMatrix z(1, 1);
    z(0, 0) = Complex(0.3, 0.4);
    EXPECT_LT(std::abs(quantize_analog(z, g2)(0, 0) - Complex(0.0, 1.0)), 1e-15);

    z(0, 0) = Complex(-1.0, 0.0);
    EXPECT_LT(std::abs(quantize_analog(z, g2)(0, 0) - std::exp(Complex(0.0, -pi))), 1e-15);

    z(0, 0) = Complex(0.0, 0.0);
    EXPECT_LT(std::abs(quantize_analog(z, PhaseShifterGrid(4, 0.5))(0, 0) - Complex(0.5, 0.0)), 1e-15);
}

TEST(QuantizeAnalog, IdempotentOnGrid)
{
    const PhaseShifterGrid g(5, 0.25);
    CMatrix m(1, g.level_count());
    for (long i = 0; i < g.level_count(); ++i)
        m(0, i) = 3.0 * g.entry(i);
    const CMatrix q = quantize_analog(m, g);
    EXPECT_LT(max_abs(q - m / 3.0), 1e-14);
}

TEST(QuantizeAnalog, MatchesExhaustiveNearestLevel)
{
    std::mt19937_64 rng(21);
    for (int bits : {1, 2, 4, 6})
    {
        const PhaseShifterGrid g(bits, 0.125);
        const CMatrix t = random_complex(8, 16, rng);
        const CMatrix q = quantize_analog(t, g);
        for (Eigen::Index j = 0; j < t.cols(); ++j)
            for (Eigen::Index i = 0; i < t.rows(); ++i)
                EXPECT_LT(std::abs(q(i, j) - nearest_on_grid(t(i, j), g)), 1e-12);
        EXPECT_TRUE(all_on_grid(q, g));
    }
}

TEST(Procrustes, Examples)
{
    EXPECT_LT(max_abs(procrustes_digital(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), 1.0) -
                      CMatrix::Identity(2, 2)),
              1e-14);
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 3.0;
    EXPECT_LT(max_abs(procrustes_digital(a, CMatrix::Identity(2, 2), 4.0) - 0.5 * CMatrix::Identity(2, 2)), 1e-14);
}

TEST(Procrustes, ScaledUnitary)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i)
    {
        const CMatrix d = procrustes_digital(random_complex(4, 64, rng), random_complex(4, 64, rng), 0.01);
        EXPECT_LT(max_abs(d.adjoint() * d - 100.0 * CMatrix::Identity(4, 4)), 1e-10);
    }
}

TEST(Procrustes, BeatsRandomSearch)
{
    std::mt19937_64 rng(6);
    for (int inst = 0; inst < 10; ++inst)
    {
        const CMatrix a = random_complex(2, 4, rng);
        const CMatrix t = random_complex(2, 4, rng);
        const CMatrix d = procrustes_digital(a, t, 1.0);
        const double best = (a - d.adjoint() * t).norm();
        for (int s = 0; s < 2000; ++s)
        {
            const CMatrix q = linalg::random_unitary(2, rng);
            EXPECT_GE((a - q.adjoint() * t).norm(), best - 1e-8);
        }
    }
}

TEST(Procrustes, RejectsBadInput)
{
    EXPECT_THROW(procrustes_digital(CMatrix::Zero(2, 3), CMatrix::Zero(2, 4), 1.0), InvalidDimension);
    EXPECT_THROW(procrustes_digital(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), 0.0), DomainError);
}

TEST(TargetSemiUnitary, Shapes)
{
    const CMatrix full = target_semi_unitary(4, 4, 1);
    EXPECT_LT(max_abs(full.adjoint() * full - CMatrix::Identity(4, 4)), 1e-10);

    const CMatrix rows = target_semi_unitary(64, 16, 2);
    ASSERT_EQ(rows.rows(), 16);
    ASSERT_EQ(rows.cols(), 64);
    EXPECT_LT(max_abs(rows * rows.adjoint() - CMatrix::Identity(16, 16)), 1e-10);

    const CMatrix one = target_semi_unitary(2, 1, 3);
    EXPECT_NEAR(one.norm(), 1.0, 1e-12);

    const CMatrix cols = target_semi_unitary(16, 4, 4, Orientation::Columns);
    ASSERT_EQ(cols.rows(), 16);
    EXPECT_LT(max_abs(cols.adjoint() * cols - CMatrix::Identity(4, 4)), 1e-10);

    EXPECT_THROW(target_semi_unitary(4, 5, 1), InvalidDimension);
}

TEST(TargetSemiUnitary, Deterministic)
{
    EXPECT_TRUE(target_semi_unitary(16, 8, 99) == target_semi_unitary(16, 8, 99));
}

TEST(GammaScale, Examples)
{
    EXPECT_DOUBLE_EQ(gamma_scale(CMatrix::Identity(4, 4), 4), 1.0);
    EXPECT_DOUBLE_EQ(gamma_scale(2.0 * CMatrix::Identity(4, 4), 4), 2.0);
    EXPECT_DOUBLE_EQ(gamma_scale(CMatrix::Zero(4, 4), 4), 0.0);
}

TEST(DesignCombiner, ReferenceDimensions)
{
    const SystemConfig cfg;
    const PhaseShifterGrid grid(cfg.bs_bits, 1.0 / std::sqrt(static_cast<double>(cfg.n_a)));
    const auto w = design_combiner(cfg.n_a, cfg.n_r, cfg.t_2, cfg.bs_bits, 1.0, {1e-3, 50}, 17);
    EXPECT_TRUE(w.converged);
    EXPECT_FALSE(w.exact);
    ASSERT_EQ(w.slots.size(), 4u);
    ASSERT_EQ(w.stacked.rows(), 16);
    ASSERT_EQ(w.stacked.cols(), 64);
    for (std::size_t t = 0; t < w.slots.size(); ++t)
    {
        const auto &s = w.slots[t];
        EXPECT_EQ(s.digital.rows(), 4);
        EXPECT_EQ(s.analog.rows(), 4);
        EXPECT_NEAR((s.digital * s.analog).squaredNorm(), 1.0, 1e-10);
        EXPECT_TRUE(all_on_grid(s.analog, grid));
        EXPECT_LT(max_abs(w.stacked.middleRows(static_cast<Eigen::Index>(t) * 4, 4) - s.digital * s.analog), 1e-14);
        EXPECT_FALSE(w.epsilon[t].empty());
        EXPECT_LT(w.epsilon[t].back(), 1e-3);
        EXPECT_LE(w.epsilon[t].size(), 50u);
    }
}

TEST(DesignCombiner, FullSoundingIsExact)
{
    const auto w = design_combiner(8, 2, 4, 6, 1.0, {}, 3);
    EXPECT_TRUE(w.exact);
    EXPECT_LT(max_abs(w.stacked.adjoint() * w.stacked - 0.5 * CMatrix::Identity(8, 8)), 1e-10);
    EXPECT_THROW(design_combiner(8, 2, 5, 6, 1.0, {}, 3), InvalidDimension);
}

TEST(DesignCombiner, IterationCapReportsNonConvergence)
{
    const auto w = design_combiner(64, 4, 4, 6, 1.0, {1e-3, 1}, 8);
    EXPECT_FALSE(w.converged);
    for (const auto &s : w.slots)
        EXPECT_NEAR((s.digital * s.analog).squaredNorm(), 1.0, 1e-10);
}

TEST(DesignCombiner, BetterIdentityApproximationThanRandomPhases)
{
    double ia = 0.0, rnd = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        const auto w = design_combiner(64, 4, 4, 6, 1.0, {1e-3, 100}, s);
        const auto r = random_combiner(64, 4, 4, 6, 1.0, s + 1000);
        ia += ia_error(w.stacked.adjoint() * w.stacked);
        rnd += ia_error(r.stacked.adjoint() * r.stacked);
    }
    EXPECT_LT(ia, rnd);
}

TEST(DesignCombiner, FinerPhasesApproximateBetter)
{
    double fine = 0.0, coarse = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        const CMatrix w7 = design_combiner(64, 4, 4, 7, 1.0, {1e-3, 100}, s).stacked;
        const CMatrix w5 = design_combiner(64, 4, 4, 5, 1.0, {1e-3, 100}, s).stacked;
        fine += ia_error(w7.adjoint() * w7);
        coarse += ia_error(w5.adjoint() * w5);
    }
    EXPECT_LE(fine, coarse);
}

TEST(DesignPrecoder, ReferenceDimensions)
{
    const PhaseShifterGrid grid(4, 0.25);
    const auto f = design_precoder(16, 1, 4, 4, 1.0, {1e-3, 50}, 23);
    EXPECT_TRUE(f.converged);
    ASSERT_EQ(f.slots.size(), 4u);
    ASSERT_EQ(f.effective.rows(), 16);
    ASSERT_EQ(f.effective.cols(), 4);
    for (std::size_t t = 0; t < f.slots.size(); ++t)
    {
        const auto &s = f.slots[t];
        ASSERT_EQ(s.digital.rows(), 1);
        ASSERT_EQ(s.digital.cols(), 1);
        EXPECT_NEAR((s.analog * s.digital).squaredNorm(), 1.0, 1e-10);
        EXPECT_TRUE(all_on_grid(s.analog, grid));
        EXPECT_LT((f.effective.col(static_cast<Eigen::Index>(t)) - s.analog.col(0) * s.digital(0, 0)).norm(), 1e-14);
    }
}

TEST(DesignPrecoder, MultipleRfChainsExpandDigitalVector)
{
    const auto f = design_precoder(16, 2, 4, 4, 2.0, {1e-3, 100}, 4);
    for (const auto &s : f.slots)
    {
        EXPECT_NEAR((s.analog * s.digital).squaredNorm(), 2.0, 1e-10);
        // F_B = f_B 1^T / M_R has identical columns.
        EXPECT_LT((s.digital.col(0) - s.digital.col(1)).norm(), 1e-14);
    }
}

TEST(DesignPrecoder, BetterIdentityApproximationThanRandomPhases)
{
    double ia = 0.0, rnd = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        const auto f = design_precoder(16, 1, 4, 4, 1.0, {1e-3, 100}, s);
        const auto r = random_precoder(16, 1, 4, 4, 1.0, s + 1000);
        ia += ia_error(f.effective * f.effective.adjoint());
        rnd += ia_error(r.effective * r.effective.adjoint());
    }
    EXPECT_LT(ia, rnd);
}
