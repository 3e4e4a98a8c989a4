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

#ifndef BSCE_IA_DESIGN_HPP
#define BSCE_IA_DESIGN_HPP

#include "config.hpp"
#include "linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace bsce
{
    // b-bit phase shifters: phases (in units of pi) {-1 + 2m/2^b}, every
    // entry of an analog matrix has modulus `magnitude`.
    struct PhaseShifterGrid
    {
        int bits = 6;
        double magnitude = 1.0;

        PhaseShifterGrid(int bits_, double magnitude_) : bits(bits_), magnitude(magnitude_)
        {
            if (bits < 1 || bits > 30)
                throw InvalidDimension("PhaseShifterGrid: bits must be in [1, 30]");
            if (!(magnitude > 0.0))
                throw DomainError("PhaseShifterGrid: magnitude must be positive");
        }

        long level_count() const { return 1L << bits; }
        double level(long m) const { return -1.0 + 2.0 * static_cast<double>(m) / static_cast<double>(level_count()); }

        std::vector<double> levels() const
        {
            std::vector<double> out(static_cast<std::size_t>(level_count()));
            for (long m = 0; m < level_count(); ++m)
                out[static_cast<std::size_t>(m)] = level(m);
            return out;
        }

        // Nearest level index for a phase given in units of pi; +1 wraps to -1.
        long nearest_level(double phase_over_pi) const
        {
            const double steps = (phase_over_pi + 1.0) * static_cast<double>(level_count()) / 2.0;
            const long m = std::lround(steps) % level_count();
            return m < 0 ? m + level_count() : m;
        }

        Complex entry(long m) const { return magnitude * std::exp(j_unit * (pi * level(m))); }

        // True when z has the grid modulus and a grid phase (tolerance tol).
        bool contains(const Complex &z, double tol = 1e-12) const
        {
            if (std::abs(std::abs(z) - magnitude) > tol * std::max(1.0, magnitude))
                return false;
            const long m = nearest_level(std::arg(z) / pi);
            return std::abs(z - entry(m)) <= tol * std::max(1.0, magnitude) * 10.0;
        }
    };

    // Projection onto the phase-shifter feasible set: keep each entry's
    // phase, snap it to the nearest level, set the modulus. Zero entries get
    // phase 0.
    inline CMatrix quantize_analog(const CMatrix &target, const PhaseShifterGrid &grid)
    {
        CMatrix out(target.rows(), target.cols());
        const long zero_level = grid.nearest_level(0.0);
        for (Eigen::Index c = 0; c < target.cols(); ++c)
            for (Eigen::Index r = 0; r < target.rows(); ++r)
            {
                const Complex z = target(r, c);
                const long m = (z == Complex(0.0, 0.0)) ? zero_level : grid.nearest_level(std::arg(z) / pi);
                out(r, c) = grid.entry(m);
            }
        return out;
    }

    /*!MD
    # procrustes_digital
    Closed-form digital update of the alternating design. Given the analog
    matrix A (R x n) and target T (R_t x n), returns

        D = beta^{-1/2} * V * U^H,   U*S*V^H = svd(A * T^H)

    which minimizes ||A - D^H T||_F subject to D^H D = I / beta (square case).
    For non-square A*T^H the thin SVD is used and D has orthonormal columns
    up to the beta scaling.
    MD!*/
    inline CMatrix procrustes_digital(const CMatrix &analog, const CMatrix &target, double beta)
    {
        if (analog.cols() != target.cols())
            throw InvalidDimension("procrustes_digital: analog and target must have the same column count");
        if (!(beta > 0.0))
            throw DomainError("procrustes_digital: beta must be positive");
        const auto svd = linalg::canonical_svd(analog * target.adjoint());
        return (1.0 / std::sqrt(beta)) * svd.v * svd.u.adjoint();
    }

    enum class Orientation
    {
        Rows,   // combiner: X * X^H = I
        Columns // precoder: X^H * X = I
    };

    // First `count` rows (or columns) of the left singular basis of a
    // uniform-[0,1] random dim x dim matrix.
    inline CMatrix target_semi_unitary(long dim, long count, std::uint64_t rng_seed,
                                       Orientation orientation = Orientation::Rows)
    {
        if (dim < 1 || count < 1)
            throw InvalidDimension("target_semi_unitary: dimensions must be >= 1");
        if (count > dim)
            throw InvalidDimension("target_semi_unitary: cannot take more rows/columns than the dimension");
        std::mt19937_64 rng(rng_seed);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        CMatrix a(dim, dim);
        for (long c = 0; c < dim; ++c)
            for (long r = 0; r < dim; ++r)
                a(r, c) = Complex(uni(rng), 0.0);
        const auto svd = linalg::canonical_svd(a);
        if (orientation == Orientation::Rows)
            return svd.u.topRows(count);
        return svd.u.leftCols(count);
    }

    // ||m||_F / sqrt(dim)
    inline double gamma_scale(const CMatrix &m, long dim)
    {
        if (dim < 1)
            throw InvalidDimension("gamma_scale: dim must be >= 1");
        return m.norm() / std::sqrt(static_cast<double>(dim));
    }

    // ||G - gamma(G) I||_F for a Gram matrix G.
    inline double identity_approximation_error(const CMatrix &gram)
    {
        const double g = gamma_scale(gram, gram.rows());
        return (gram - g * CMatrix::Identity(gram.rows(), gram.cols())).norm();
    }

    struct AlternatingResult
    {
        CMatrix digital;            // R_t x R
        CMatrix analog;             // R x n, on the grid
        std::vector<double> epsilon; // normalized iteration error per iteration
        bool converged = false;
    };

    // One slot of the alternating minimization. `target` is R_t x n,
    // the analog block is R x n. The returned digital factor has already been
    // rescaled so that ||digital * analog||_F^2 = power.
    template <typename Rng>
    AlternatingResult alternating_design(const CMatrix &target, long analog_rows, const PhaseShifterGrid &grid,
                                         double beta, double power, double delta, int max_iters, Rng &rng)
    {
        if (max_iters < 1)
            throw InvalidDimension("alternating_design: max_iters must be >= 1");
        const Eigen::Index n = target.cols();
        std::uniform_int_distribution<long> pick(0, grid.level_count() - 1);
        CMatrix analog(analog_rows, n);
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < analog_rows; ++r)
                analog(r, c) = grid.entry(pick(rng));
        CMatrix digital = CMatrix::Zero(target.rows(), analog_rows);

        const double target_norm = target.norm();
        auto mismatch = [&](const CMatrix &dg, const CMatrix &an)
        {
            const CMatrix prod = dg * an;
            const double pn = prod.norm();
            if (pn == 0.0 || target_norm == 0.0)
                return std::numeric_limits<double>::infinity();
            return (prod / pn - target / target_norm).norm();
        };

        AlternatingResult res;
        double best = std::numeric_limits<double>::infinity();
        CMatrix best_digital = digital;
        CMatrix best_analog = analog;
        for (int it = 1; it <= max_iters; ++it)
        {
            const CMatrix w_d = procrustes_digital(analog, target, beta);
            const CMatrix next_digital = beta * w_d;
            const CMatrix next_analog = quantize_analog(w_d.adjoint() * target, grid);

            const double num = (next_analog - analog).squaredNorm() + (next_digital - digital).squaredNorm();
            const double den = analog.squaredNorm() + digital.squaredNorm();
            const double eps = num / den;
            res.epsilon.push_back(eps);

            digital = next_digital;
            analog = next_analog;
            const double obj = mismatch(digital, analog);
            if (obj < best)
            {
                best = obj;
                best_digital = digital;
                best_analog = analog;
            }
            if (eps < delta)
            {
                res.converged = true;
                break;
            }
        }
        if (!res.converged)
        {
            digital = best_digital;
            analog = best_analog;
        }
        const double scale = (digital * analog).norm();
        if (scale > 0.0)
            digital *= std::sqrt(power) / scale;
        res.digital = digital;
        res.analog = analog;
        return res;
    }

    /*!MD
    # HybridCombiner
    T_2 slots of (digital N_R x N_R, analog N_R x N_A). `stacked` is the
    T_3 x N_A matrix W whose row block t is digital_t * analog_t.
    `exact` marks the fully sounded case T_3 = N_A, where W is the
    semi-unitary target itself and no phase-shifter constraint is applied.
    MD!*/
    struct HybridCombiner
    {
        struct Slot
        {
            CMatrix digital;
            CMatrix analog;
        };
        std::vector<Slot> slots;
        CMatrix stacked;
        bool converged = true;
        bool exact = false;
        std::vector<std::vector<double>> epsilon; // per slot

        long n_r() const { return slots.empty() ? 0 : static_cast<long>(slots.front().digital.rows()); }
    };

    // T_1 slots of (digital M_R x M_R, analog M_A x M_R). Column t of
    // `effective` is analog_t * digital_t * 1.
    struct HybridPrecoder
    {
        struct Slot
        {
            CMatrix analog;
            CMatrix digital;
        };
        std::vector<Slot> slots;
        CMatrix effective;
        bool converged = true;
        bool exact = false;
        std::vector<std::vector<double>> epsilon;
    };

    inline CMatrix stack_combiner(const std::vector<HybridCombiner::Slot> &slots)
    {
        if (slots.empty())
            return {};
        const Eigen::Index rows = slots.front().digital.rows();
        const Eigen::Index n = slots.front().analog.cols();
        CMatrix w(rows * static_cast<Eigen::Index>(slots.size()), n);
        for (std::size_t t = 0; t < slots.size(); ++t)
            w.middleRows(static_cast<Eigen::Index>(t) * rows, rows) = slots[t].digital * slots[t].analog;
        return w;
    }

    inline CMatrix effective_precoder(const std::vector<HybridPrecoder::Slot> &slots)
    {
        if (slots.empty())
            return {};
        const Eigen::Index m = slots.front().analog.rows();
        CMatrix f(m, static_cast<Eigen::Index>(slots.size()));
        for (std::size_t t = 0; t < slots.size(); ++t)
        {
            const auto &s = slots[t];
            f.col(static_cast<Eigen::Index>(t)) = s.analog * s.digital * CVector::Ones(s.digital.cols());
        }
        return f;
    }

    struct DesignOptions
    {
        double delta = 1e-3;
        int max_iters = 100;
    };

    inline HybridCombiner design_combiner(long n_a, long n_r, long t_2, int bits, double p_w,
                                          const DesignOptions &opt, std::uint64_t rng_seed)
    {
        if (n_a < 1 || n_r < 1 || t_2 < 1)
            throw InvalidDimension("design_combiner: dimensions must be >= 1");
        const long t_3 = t_2 * n_r;
        if (t_3 > n_a)
            throw InvalidDimension("design_combiner: T_2 * N_R must not exceed N_A");
        const CMatrix target = target_semi_unitary(n_a, t_3, derive_seed(rng_seed, 0xC0), Orientation::Rows);

        HybridCombiner w;
        if (t_3 == n_a)
        {
            w.exact = true;
            for (long t = 0; t < t_2; ++t)
            {
                const CMatrix block = target.middleRows(t * n_r, n_r);
                w.slots.push_back({std::sqrt(p_w) / block.norm() * CMatrix::Identity(n_r, n_r), block});
            }
            w.stacked = stack_combiner(w.slots);
            return w;
        }

        const PhaseShifterGrid grid(bits, 1.0 / std::sqrt(static_cast<double>(n_a)));
        const double beta = p_w / static_cast<double>(n_a * n_r);
        for (long t = 0; t < t_2; ++t)
        {
            std::mt19937_64 rng(derive_seed(rng_seed, 0xC1, t));
            auto res = alternating_design(CMatrix(target.middleRows(t * n_r, n_r)), n_r, grid, beta, p_w,
                                          opt.delta, opt.max_iters, rng);
            w.converged = w.converged && res.converged;
            w.epsilon.push_back(std::move(res.epsilon));
            w.slots.push_back({std::move(res.digital), std::move(res.analog)});
        }
        w.stacked = stack_combiner(w.slots);
        return w;
    }

    inline HybridCombiner design_combiner(const SystemConfig &cfg, std::uint64_t rng_seed)
    {
        return design_combiner(cfg.n_a, cfg.n_r, cfg.t_2, cfg.bs_bits, cfg.p_w, {cfg.delta, cfg.max_iters}, rng_seed);
    }

    /*!MD
    # design_precoder
    Mirror of `design_combiner` on the user side. Each slot t fits
    F_R * f_B to column t of a semi-unitary M_A x T_1 target by running
    the same alternating minimization on the Hermitian-transposed problem
    (analog F_R^H is M_R x M_A, digital f_B^H is 1 x M_R). The digital
    vector is expanded to F_B = f_B * 1^T / M_R and rescaled so that
    ||F_R F_B||_F^2 = p_f.
    MD!*/
    inline HybridPrecoder design_precoder(long m_a, long m_r, long t_1, int bits, double p_f,
                                          const DesignOptions &opt, std::uint64_t rng_seed)
    {
        if (m_a < 1 || m_r < 1 || t_1 < 1)
            throw InvalidDimension("design_precoder: dimensions must be >= 1");
        if (t_1 > m_a)
            throw InvalidDimension("design_precoder: T_1 must not exceed M_A");
        const CMatrix target = target_semi_unitary(m_a, t_1, derive_seed(rng_seed, 0xF0), Orientation::Columns);

        HybridPrecoder f;
        if (t_1 == m_a)
        {
            f.exact = true;
            for (long t = 0; t < t_1; ++t)
            {
                CMatrix analog = CMatrix::Zero(m_a, m_r);
                analog.col(0) = target.col(t);
                CMatrix digital = CMatrix::Zero(m_r, m_r);
                digital(0, 0) = std::sqrt(p_f);
                f.slots.push_back({std::move(analog), std::move(digital)});
            }
            f.effective = effective_precoder(f.slots);
            return f;
        }

        const PhaseShifterGrid grid(bits, 1.0 / std::sqrt(static_cast<double>(m_a)));
        const double beta = p_f / static_cast<double>(m_a * m_r);
        for (long t = 0; t < t_1; ++t)
        {
            std::mt19937_64 rng(derive_seed(rng_seed, 0xF1, t));
            const CMatrix row_target = target.col(t).adjoint();
            auto res = alternating_design(row_target, m_r, grid, beta, p_f, opt.delta, opt.max_iters, rng);
            const CMatrix analog = res.analog.adjoint();   // M_A x M_R
            const CVector f_b = res.digital.adjoint();     // M_R
            CMatrix digital = f_b * CVector::Ones(m_r).transpose() / static_cast<double>(m_r);
            const double scale = (analog * digital).norm();
            if (scale > 0.0)
                digital *= std::sqrt(p_f) / scale;
            f.converged = f.converged && res.converged;
            f.epsilon.push_back(std::move(res.epsilon));
            f.slots.push_back({analog, std::move(digital)});
        }
        f.effective = effective_precoder(f.slots);
        return f;
    }

    inline HybridPrecoder design_precoder(const SystemConfig &cfg, std::uint64_t rng_seed)
    {
        return design_precoder(cfg.m_a, cfg.m_r, cfg.t_1, cfg.ue_bits, cfg.p_f, {cfg.delta, cfg.max_iters}, rng_seed);
    }

    // Random-measurement stand-in: analog phases drawn uniformly from the
    // grid, digital factors Haar unitary, per-slot power normalized.
    inline HybridCombiner random_combiner(long n_a, long n_r, long t_2, int bits, double p_w, std::uint64_t rng_seed)
    {
        const PhaseShifterGrid grid(bits, 1.0 / std::sqrt(static_cast<double>(n_a)));
        std::mt19937_64 rng(rng_seed);
        std::uniform_int_distribution<long> pick(0, grid.level_count() - 1);
        HybridCombiner w;
        for (long t = 0; t < t_2; ++t)
        {
            CMatrix analog(n_r, n_a);
            for (long c = 0; c < n_a; ++c)
                for (long r = 0; r < n_r; ++r)
                    analog(r, c) = grid.entry(pick(rng));
            CMatrix digital = linalg::random_unitary(n_r, rng);
            digital *= std::sqrt(p_w) / (digital * analog).norm();
            w.slots.push_back({std::move(digital), std::move(analog)});
        }
        w.stacked = stack_combiner(w.slots);
        return w;
    }

    inline HybridPrecoder random_precoder(long m_a, long m_r, long t_1, int bits, double p_f, std::uint64_t rng_seed)
    {
        const PhaseShifterGrid grid(bits, 1.0 / std::sqrt(static_cast<double>(m_a)));
        std::mt19937_64 rng(rng_seed);
        std::uniform_int_distribution<long> pick(0, grid.level_count() - 1);
        HybridPrecoder f;
        for (long t = 0; t < t_1; ++t)
        {
            CMatrix analog(m_a, m_r);
            for (long c = 0; c < m_r; ++c)
                for (long r = 0; r < m_a; ++r)
                    analog(r, c) = grid.entry(pick(rng));
            CMatrix digital = linalg::random_unitary(m_r, rng);
            digital *= std::sqrt(p_f) / (analog * digital).norm();
            f.slots.push_back({std::move(analog), std::move(digital)});
        }
        f.effective = effective_precoder(f.slots);
        return f;
    }
}

#endif
