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

#include <cstdint>
#include <random>
#include <string>

#include "bfc/types.hpp"

namespace bfc {

/// Mixes a stream key into a seed (splitmix64 finalizer). Used wherever work is
/// split into independently seeded streams: per setting, per trial, per chain.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator with a fully serializable state.
///
/// Normal variates come from Box-Muller without a cached spare, so the engine
/// state alone determines every future draw. Complex standard normals use both
/// halves of one Box-Muller pair, giving real and imaginary parts of variance 1/2.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t key) { return Rng(derive_seed(seed, key)); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double normal();
    cplx complex_normal();
    CVector complex_normal_vector(Eigen::Index n);

    std::mt19937_64 &engine() { return engine_; }

    std::string save_state() const;
    void restore_state(const std::string &state);

    bool operator==(const Rng &other) const { return engine_ == other.engine_; }

  private:
    double open_uniform();

    std::mt19937_64 engine_;
};

} // namespace bfc
