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

#ifndef BSCE_CONFIG_HPP
#define BSCE_CONFIG_HPP

#include "common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bsce
{
    enum class SweepKind
    {
        Snr,   // NMSE / sum-rate versus SNR at fixed T_1, T_2
        Slots  // NMSE / sum-rate versus total training slots at fixed SNR
    };

    // All dimensional and physical parameters of one experiment. Defaults
    // reproduce the reference uplink setup: 64-antenna/4-RF-chain BS, four
    // 16-antenna single-RF-chain users, K = 1024, three paths.
    struct SystemConfig
    {
        long n_a = 64;
        long m_a = 16;
        long n_r = 4;
        long m_r = 1;
        long u = 4;
        long k = 1024;
        long t_1 = 4;
        long t_2 = 4;
        int bs_bits = 6;
        int ue_bits = 4;
        long l_paths = 3;
        double nlos_var = 0.01;
        std::vector<double> snr_db_list{0.0, 5.0, 10.0, 15.0, 20.0};
        long trials = 100;
        double delta = 1e-3;
        std::uint64_t seed = 1;
        std::vector<Scheme> schemes{Scheme::IA, Scheme::SZO, Scheme::CZO, Scheme::RandomBaseline};

        double p_w = 1.0;
        double p_f = 1.0;
        int max_iters = 100;
        SweepKind sweep = SweepKind::Snr;
        std::vector<long> total_slots_list{16, 36, 64, 100};

        long t_3() const { return t_2 * n_r; }
    };
}

#endif
