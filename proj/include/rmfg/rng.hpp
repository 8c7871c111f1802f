// Copyright 2026 The robust-mfg Authors
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
#include <span>

#include "rmfg/distribution.hpp"

namespace rmfg {

/// Counter-based pseudo-random generator built from SplitMix64 output
/// mixing: every draw is a pure function of (seed, stream, counter), so a
/// fixed seed reproduces the same draws for stream k no matter how many
/// threads consume the streams or in which order. One stream per Monte
/// Carlo path keeps simulations reproducible under any partitioning.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform draw in [0, 1) with 53 random bits.
  double next_unit();
  /// Inverse-CDF sample from a discrete distribution.
  int sample(const DiscreteDistribution& d);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Order-independent pairwise summation; used to aggregate Monte Carlo
/// payoffs identically regardless of how paths were partitioned.
double pairwise_sum(std::span<const double> values);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Sample mean and standard error (pairwise-summed, two-pass).
MeanStderr mean_and_stderr(std::span<const double> values);

}  // namespace rmfg
