// SPDX-License-Identifier: Apache-2.0
//
// dris: double-RIS multi-user MIMO transceiver design
// Copyright (C) 2026 The dris authors
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

#ifndef DRIS_DRIS_HPP
#define DRIS_DRIS_HPP

#include "baselines.hpp"
#include "channel.hpp"
#include "config_io.hpp"
#include "container.hpp"
#include "equalizer.hpp"
#include "harness.hpp"
#include "objective.hpp"
#include "precoder.hpp"
#include "random.hpp"
#include "reflection.hpp"
#include "solver.hpp"
#include "types.hpp"
#include "workspace.hpp"

#endif
