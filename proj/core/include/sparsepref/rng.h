// Copyright 2026 The sparsepref Authors.
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

#ifndef SPARSEPREF_RNG_H_
#define SPARSEPREF_RNG_H_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace sparsepref {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// The output is a pure function of (key, counter), so independent substreams
// are obtained by deriving a new key instead of advancing a shared state.
// Every trial of an experiment gets its own key derived from the base seed
// and the trial coordinates, which makes results independent of execution
// order and of the number of worker threads.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  // Applies the 10-round bijection to `counter` under `key`.
  static Counter Block(Counter counter, Key key);
};

// Stateful wrapper around Philox4x32 producing 64-bit words. Satisfies
// UniformRandomBitGenerator, so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Independent generator keyed by (this key, ids...). Does not consume
  // output from *this.
  Rng Substream(std::initializer_list<std::uint64_t> ids) const;

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  double Normal();
  // Uniform integer in [0, n).
  std::uint64_t Index(std::uint64_t n);
  bool Bernoulli(double p) { return Uniform() < p; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  Philox4x32::Counter counter_{};
  Philox4x32::Counter block_{};
  int used_ = 4;  // 32-bit words of block_ already handed out
  std::normal_distribution<double> normal_;
};

// SplitMix64-style finalizer chained over `words`; used to derive trial seeds
// from (base seed, grid coordinates, trial index).
std::uint64_t HashSeed(std::initializer_list<std::uint64_t> words);

// Bit pattern of a double, for hashing grid coordinates.
std::uint64_t DoubleBits(double v);

}  // namespace sparsepref

#endif  // SPARSEPREF_RNG_H_
