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

#include "bfc/bessel.hpp"

#include <cmath>
#include <cstdlib>

#include "bfc/error.hpp"

namespace bfc {

namespace {

constexpr double kSeriesLimit = 1.0;

double series(int n, double x) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= 0.5 * x / i;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

} // namespace

std::vector<double> bessel_j_table(int max_order, double x) {
    if (max_order < 0 || !(x >= 0.0) || !std::isfinite(x))
        throw Error(ErrorCode::kInvalidArguments, "bessel_j_table needs max_order >= 0 and finite x >= 0");
    std::vector<double> out(max_order + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x <= kSeriesLimit) {
        for (int n = 0; n <= max_order; ++n) out[n] = series(n, x);
        return out;
    }

    // Start well above both the requested order and the turning point n ~ x.
    const int top = std::max(max_order, static_cast<int>(x));
    int start = top + 20 + static_cast<int>(std::sqrt(40.0 * top));
    start += start % 2;
    double next = 0.0;
    double current = 1e-300;
    std::vector<double> work(start + 1, 0.0);
    work[start] = current;
    for (int n = start; n >= 1; --n) {
        const double prev = 2.0 * n / x * current - next;
        next = current;
        current = prev;
        work[n - 1] = current;
        if (std::abs(current) > 1e250) {
            for (int m = n - 1; m <= start; ++m) work[m] *= 1e-250;
            current *= 1e-250;
            next *= 1e-250;
        }
    }
    double norm = work[0];
    for (int n = 2; n <= start; n += 2) norm += 2.0 * work[n];
    for (int n = 0; n <= max_order; ++n) out[n] = work[n] / norm;
    return out;
}

double bessel_j(int order, double x) {
    const int n = std::abs(order);
    const double value = bessel_j_table(n, x)[n];
    return (order < 0 && (n % 2 == 1)) ? -value : value;
}

} // namespace bfc
