// Copyright 2026 The manifold-jko Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bounded fan-out for independent tasks (refinement runs, scenario sets).

#ifndef MJKO_PARALLEL_HPP_
#define MJKO_PARALLEL_HPP_

#include <cstddef>
#include <future>
#include <type_traits>
#include <vector>

namespace mjko {

// MANIFOLD_JKO_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t WorkerCount();

// Evaluates fn(0) .. fn(n - 1) on at most WorkerCount() threads. Results are
// returned in index order; the first exception (by index) is rethrown.
template <typename Fn>
auto ParallelMap(std::size_t n, Fn fn)
    -> std::vector<std::invoke_result_t<Fn, std::size_t>> {
  using Result = std::invoke_result_t<Fn, std::size_t>;
  std::vector<Result> out;
  out.reserve(n);
  const std::size_t workers = WorkerCount();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
  }
  for (std::size_t start = 0; start < n; start += workers) {
    std::vector<std::future<Result>> wave;
    for (std::size_t i = start; i < n && i < start + workers; ++i) {
      wave.push_back(std::async(std::launch::async, fn, i));
    }
    for (auto& f : wave) out.push_back(f.get());
  }
  return out;
}

}  // namespace mjko

#endif  // MJKO_PARALLEL_HPP_
