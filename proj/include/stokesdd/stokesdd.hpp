// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The stokesdd Authors
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

#pragma once

#include "stokesdd/channel.hpp"
#include "stokesdd/channel_estimation.hpp"
#include "stokesdd/config.hpp"
#include "stokesdd/constellation.hpp"
#include "stokesdd/detection.hpp"
#include "stokesdd/experiment.hpp"
#include "stokesdd/frontend.hpp"
#include "stokesdd/gaussian_stats.hpp"
#include "stokesdd/metrics.hpp"
#include "stokesdd/moment_oracle.hpp"
#include "stokesdd/parallel.hpp"
#include "stokesdd/plot_script.hpp"
#include "stokesdd/receiver.hpp"
#include "stokesdd/rng.hpp"
#include "stokesdd/simulation.hpp"
#include "stokesdd/types.hpp"
