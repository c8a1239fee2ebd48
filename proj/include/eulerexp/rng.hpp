/*
   Copyright 2026 The eulerexp Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <array>
#include <cstdint>

namespace eulerexp {

// Philox4x32-10 counter-based generator.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key);
};

// Counter domains keep independent uses of one (seed, stream) apart.
enum class RngDomain : std::uint64_t {
  Root = 0,
  Bisection = 1,
  Bridge = 2,
  Insert = 3,
  Inner = 4,
  Test = 15
};

// Builds the 64-bit counter from (domain, level, index); index < 2^48.
constexpr std::uint64_t make_counter(RngDomain d, std::uint64_t level,
                                     std::uint64_t index) {
  return (static_cast<std::uint64_t>(d) << 60) | ((level & 0xfffu) << 48) |
         (index & 0xffffffffffffull);
}

// Two independent standard normals for (seed, stream, counter).
std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t stream,
                                  std::uint64_t counter);

// Two uniforms in (0, 1).
std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t counter);

// The k-th normal of a (domain, level) sequence; pairs share a counter.
inline double normal_at(std::uint64_t seed, std::uint64_t stream, RngDomain d,
                        std::uint64_t level, std::uint64_t k) {
  return normal_pair(seed, stream, make_counter(d, level, k >> 1))[k & 1];
}

// Sequential reader over a (domain, level) sequence; avoids recomputing the
// shared counter for the second member of each pair.
class NormalSequence {
 public:
  NormalSequence(std::uint64_t seed, std::uint64_t stream, RngDomain d,
                 std::uint64_t level)
      : seed_(seed), stream_(stream), domain_(d), level_(level) {}

  double operator()(std::uint64_t k) {
    std::uint64_t c = k >> 1;
    if (c != cached_) {
      pair_ = normal_pair(seed_, stream_, make_counter(domain_, level_, c));
      cached_ = c;
    }
    return pair_[k & 1];
  }

 private:
  std::uint64_t seed_, stream_;
  RngDomain domain_;
  std::uint64_t level_;
  std::uint64_t cached_ = ~0ull;
  std::array<double, 2> pair_{};
};

}  // namespace eulerexp
