// Copyright 2026 The spanclust Authors.
//
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

#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace spanclust {

/// Worker count: `requested` if positive, else SPANCLUST_THREADS, else the
/// hardware concurrency.
int resolve_threads(int requested);

/// Runs body(index, worker) for index in [0, count) on `threads` workers,
/// each owning one contiguous block. The first exception thrown by any
/// worker is rethrown after all workers finish.
template <class Body>
void parallel_for(Eigen::Index count, int threads, Body&& body) {
  const Eigen::Index workers =
      std::max<Eigen::Index>(1, std::min<Eigen::Index>(threads, count));
  if (workers <= 1) {
    for (Eigen::Index i = 0; i < count; ++i) body(i, 0);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Eigen::Index w = 0; w < workers; ++w) {
    const Eigen::Index begin = count * w / workers;
    const Eigen::Index end = count * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (Eigen::Index i = begin; i < end; ++i) body(i, static_cast<int>(w));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace spanclust
