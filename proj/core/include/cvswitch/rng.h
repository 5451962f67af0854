// Copyright 2026 The cvswitch Authors
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

#ifndef CVSWITCH_RNG_H
#define CVSWITCH_RNG_H

#include <cstdint>
#include <limits>

namespace cvswitch {

/// Counter-based 64-bit generator.
///
/// The k-th output is a fixed bijective mix of (key, k), so a stream is fully
/// determined by its key and position. `split` derives independent child keys,
/// which is how Monte Carlo trials get their own streams regardless of which
/// worker runs them. Satisfies UniformRandomBitGenerator.
class Rng {
   public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)), counter_(0) {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() {
        return mix(key_ + kGamma * ++counter_);
    }

    /// Child stream identified by `stream`. Does not advance this generator.
    Rng split(uint64_t stream) const;

    uint64_t key() const {
        return key_;
    }
    uint64_t counter() const {
        return counter_;
    }

   private:
    struct FromKey {};
    Rng(FromKey, uint64_t key) : key_(key), counter_(0) {
    }

    static constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    static constexpr uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t key_;
    uint64_t counter_;
};

}  // namespace cvswitch

#endif
