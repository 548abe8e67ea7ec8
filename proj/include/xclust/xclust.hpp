// Copyright 2026 The xclust Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "xclust/core.hpp"
#include "xclust/cut_process.hpp"
#include "xclust/errors.hpp"
#include "xclust/experiment.hpp"
#include "xclust/hitting_set.hpp"
#include "xclust/instances.hpp"
#include "xclust/io.hpp"
#include "xclust/kmeans.hpp"
#include "xclust/oracle.hpp"
#include "xclust/random_thresholds.hpp"
#include "xclust/rng.hpp"
#include "xclust/stats.hpp"
#include "xclust/verify.hpp"
