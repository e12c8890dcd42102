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

#include "bfc/rng.hpp"

#include <cmath>
#include <sstream>

#include "bfc/error.hpp"

namespace bfc {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::open_uniform() {
    // (0, 1]: keeps log() finite in Box-Muller.
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
    const double radius = std::sqrt(-2.0 * std::log(open_uniform()));
    return radius * std::cos(kTwoPi * uniform());
}

cplx Rng::complex_normal() {
    const double radius = std::sqrt(-std::log(open_uniform()));
    const double angle = kTwoPi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

CVector Rng::complex_normal_vector(Eigen::Index n) {
    CVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = complex_normal();
    return out;
}

std::string Rng::save_state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
}

void Rng::restore_state(const std::string &state) {
    std::istringstream is(state);
    is >> engine_;
    if (is.fail()) throw Error(ErrorCode::kParseError, "malformed generator state");
}

} // namespace bfc
