// Copyright 2026 The bfctomo Authors
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

#include <vector>

namespace bfc {

/// J_0(x) ... J_max_order(x) for x >= 0. Power series for small arguments,
/// Miller downward recurrence normalized by J_0 + 2 sum J_2k = 1 otherwise.
std::vector<double> bessel_j_table(int max_order, double x);

/// Integer-order J_n(x) for any sign of n, using J_{-n} = (-1)^n J_n.
double bessel_j(int order, double x);

} // namespace bfc
