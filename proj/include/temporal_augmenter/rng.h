/*
 * Copyright 2026 The TemporalAugmenter Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TEMPORAL_AUGMENTER_RNG_H_
#define TEMPORAL_AUGMENTER_RNG_H_

#include <cstddef>
#include <cstdint>
#include <span>

namespace ta {

// xoshiro256** seeded through splitmix64. Every derived draw (uniform,
// normal, bounded integer) is computed here from raw 64-bit outputs, so a
// seed produces the same sequence on every platform and standard library.
// Copying an Rng copies its position in the stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Standard normal via Box-Muller; consumes two uniforms per draw.
  double Normal();
  // Uniform integer on [0, bound), unbiased by rejection.
  std::uint64_t Below(std::uint64_t bound);
  // Fisher-Yates.
  void Shuffle(std::span<std::size_t> items);

  // Independent stream derived from this generator's seed and a tag.
  Rng Fork(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

}  // namespace ta

#endif  // TEMPORAL_AUGMENTER_RNG_H_
