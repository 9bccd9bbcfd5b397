// Copyright 2026 The ldpn Authors
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

#pragma once

#include <cstddef>
#include <vector>

#include "ldpn/model.hpp"

namespace ldpn {

// Product of a model with each instance's own acquisition order. A control
// (p, s) remembers the locks the instance acquired and still holds, most
// recent last; acq(l) appends l and rel(l) must pop it from the top. A release
// with an empty order frees a lock held from the start. Spawned instances
// start with the empty order. Runs of the result are exactly the runs of the
// input whose local runs use locks in a nested style.
struct NestedModel {
  LockDpnModel model;
  std::vector<ControlId> source_control;  // per control of `model`
  std::vector<std::vector<LockId>> order;  // per control of `model`
  std::size_t dropped_rules = 0;           // rule instances that break nesting
};

NestedModel enforce_nesting(const LockDpnModel& model);

}  // namespace ldpn
