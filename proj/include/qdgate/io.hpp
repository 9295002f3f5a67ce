// Copyright 2026 The qdgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

namespace qdgate {

/// Every number written to CSV/JSON goes through this: 12 significant digits.
std::string format_number(double value);

/// `value` rounded to 12 significant digits (for JSON emission).
double round_sig12(double value);

/// Maps an angle into (-pi, pi].
double wrap_phase(double phase);

/// Shortest signed distance between two angles, in [0, pi].
double phase_distance(double a, double b);

}  // namespace qdgate
