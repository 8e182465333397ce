// Copyright 2026 The Authors.
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

#ifndef PTIM_PARALLEL_H_
#define PTIM_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace ptim {

// Runs fn(begin, end, chunk) over [0, count) split into at most `workers`
// contiguous chunks. Chunk boundaries depend only on (count, workers); callers
// write per-index results and reduce in index order, so the output is the
// same for any worker count. The first exception thrown by a chunk is
// rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  if (count == 0) return;
  const std::size_t chunks =
      std::clamp<std::size_t>(workers == 0 ? 1 : workers, 1, count);
  if (chunks == 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks - 1);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    try {
      fn(begin, end, c);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  for (std::size_t c = 1; c < chunks; ++c) threads.emplace_back(run_chunk, c);
  run_chunk(0);
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace ptim

#endif  // PTIM_PARALLEL_H_
