/*
   Copyright 2026 The irf Authors

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

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace irf {

// Worker count used by the parallel loops; 0 means hardware concurrency.
struct Parallelism {
  unsigned threads = 0;

  unsigned resolved() const {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

// Runs body(i) for i in [0, count). Every index is written by exactly one
// task, so results stored by index never depend on the schedule. The first
// exception (lowest index among those observed) is rethrown.
template <typename Body>
void parallel_for(std::size_t count, Parallelism par, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(par.resolved(), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_index = count;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Evaluates fn(i) for every index into a vector ordered by index.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Parallelism par, Fn&& fn) {
  std::vector<T> out(count);
  parallel_for(count, par, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace irf
