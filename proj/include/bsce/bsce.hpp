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

#ifndef BSCE_BSCE_HPP
#define BSCE_BSCE_HPP

#include "beamspace.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "common.hpp"
#include "config.hpp"
#include "estimator.hpp"
#include "harness.hpp"
#include "ia_design.hpp"
#include "linalg.hpp"
#include "serialization.hpp"
#include "zo_design.hpp"

#endif
