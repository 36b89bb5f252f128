// Copyright 2026 The flowsieve Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOWSIEVE_PARALLEL_HPP_
#define FLOWSIEVE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace flowsieve {

// Worker count honoring FLOWSIEVE_THREADS (unset: hardware concurrency,
// 0 or 1: serial). Returns 1 inside a parallel region or a SerialScope.
std::size_t worker_count();

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks; callers
// must write results into per-index slots so output is independent of the
// schedule. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Forces serial execution on the current thread while alive. Timing runs
// hold one so wall-clock samples are not perturbed by concurrent fits.
class SerialScope {
 public:
  SerialScope();
  ~SerialScope();
  SerialScope(const SerialScope&) = delete;
  SerialScope& operator=(const SerialScope&) = delete;

 private:
  bool previous_;
};

}  // namespace flowsieve

#endif  // FLOWSIEVE_PARALLEL_HPP_
