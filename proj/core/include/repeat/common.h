/*
 * Copyright 2026 The repeat-xai Authors.
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

#ifndef REPEAT_COMMON_H_
#define REPEAT_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace repeat {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument or value does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// A file was readable but its contents are malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Throws ValidationError with `message` when `condition` is false.
inline void Require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

// Derives an independent 64-bit seed for stream `index` of `seed`
// (splitmix64 finalizer over a counter). Growing the number of streams never
// changes the seeds of earlier ones.
uint64_t SplitSeed(uint64_t seed, uint64_t index);

// Engine used everywhere. The engine output is fully specified by the
// standard; the conversions below are ours so that results do not depend on
// the standard library's distribution implementations.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
double UniformDouble(Rng& rng);

// Standard normal variate (Box-Muller, one value per call).
double StandardNormal(Rng& rng);

// Uniform integer in [0, bound). `bound` must be positive.
uint64_t UniformIndex(Rng& rng, uint64_t bound);

// Bernoulli(p) draw.
inline bool Bernoulli(Rng& rng, double p) { return UniformDouble(rng) < p; }

// Number of worker threads to use when the caller does not specify one:
// the REPEAT_THREADS environment variable if set, otherwise the hardware
// concurrency (at least 1).
int DefaultThreadCount();

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; callers write into per-index slots and reduce in
// index order afterwards, so results do not depend on the worker count.
// The first exception thrown by any fn(i) is rethrown on the calling thread.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn);

}  // namespace repeat

#endif  // REPEAT_COMMON_H_
