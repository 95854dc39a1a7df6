// Copyright 2026 The recordlab Authors.
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
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace recordlab {

/// Calls body(i) for every i in [0, count) on `workers` threads. Indices are
/// handed out in small chunks from a shared counter, so results must be
/// written to per-index slots for the outcome to be independent of the
/// schedule. The first exception thrown by any call is rethrown.
template <typename Body>
void parallel_for(std::uint64_t count, int workers, Body&& body) {
  constexpr std::uint64_t kChunk = 16;
  const auto threads = static_cast<std::uint64_t>(std::max(1, workers));
  if (threads == 1 || count <= kChunk) {
    for (std::uint64_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::uint64_t start = next.fetch_add(kChunk);
      if (start >= count) {
        return;
      }
      const std::uint64_t stop = std::min(count, start + kChunk);
      try {
        for (std::uint64_t i = start; i < stop; ++i) {
          body(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::uint64_t spawn = std::min(threads, (count + kChunk - 1) / kChunk);
  pool.reserve(spawn);
  for (std::uint64_t t = 0; t < spawn; ++t) {
    pool.emplace_back(worker);
  }
  for (auto& th : pool) {
    th.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

}  // namespace recordlab
