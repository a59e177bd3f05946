// Copyright 2026 The rigidform Authors
//
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

// Umbrella header.

#pragma once

#include "rigidform/apf.hpp"
#include "rigidform/bench.hpp"
#include "rigidform/constraint.hpp"
#include "rigidform/errors.hpp"
#include "rigidform/formation.hpp"
#include "rigidform/network.hpp"
#include "rigidform/planner.hpp"
#include "rigidform/random.hpp"
#include "rigidform/scenario_io.hpp"
#include "rigidform/simulator.hpp"
#include "rigidform/sweep.hpp"
