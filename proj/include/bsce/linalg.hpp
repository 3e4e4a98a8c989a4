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

#ifndef BSCE_LINALG_HPP
#define BSCE_LINALG_HPP

#include "common.hpp"

#include <random>

namespace bsce::linalg
{
    struct Svd
    {
        CMatrix u;      // thin left singular vectors, columns
        RVector sigma;  // non-increasing
        CMatrix v;      // thin right singular vectors, columns
    };

    // Thin SVD with a reproducible phase convention: the first component of
    // each left singular vector whose modulus exceeds 1e-12 is real positive.
    // The matching right singular vector gets the same rotation, so
    // u * diag(sigma) * v^H is unchanged.
    inline Svd canonical_svd(const CMatrix &a)
    {
        Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Svd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
        for (Eigen::Index c = 0; c < out.u.cols(); ++c)
        {
            for (Eigen::Index r = 0; r < out.u.rows(); ++r)
            {
                const double mag = std::abs(out.u(r, c));
                if (mag > 1e-12)
                {
                    const Complex rot = std::conj(out.u(r, c)) / mag;
                    out.u.col(c) *= rot;
                    out.v.col(c) *= rot;
                    break;
                }
            }
        }
        return out;
    }

    // Entry-wise CN(0, variance).
    template <typename Rng>
    CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, double variance, Rng &rng)
    {
        std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
        CMatrix m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                const double re = nd(rng);
                const double im = nd(rng);
                m(r, c) = Complex(re, im);
            }
        return m;
    }

    // Haar-distributed n x n unitary (QR of a complex Gaussian matrix with
    // the diagonal phases of R removed).
    template <typename Rng>
    CMatrix random_unitary(Eigen::Index n, Rng &rng)
    {
        const CMatrix g = complex_gaussian(n, n, 1.0, rng);
        Eigen::HouseholderQR<CMatrix> qr(g);
        CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
        const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double mag = std::abs(r(i, i));
            if (mag > 0.0)
                q.col(i) *= r(i, i) / mag;
        }
        return q;
    }

    inline double frobenius_sq(const CMatrix &m) { return m.squaredNorm(); }
}

#endif
