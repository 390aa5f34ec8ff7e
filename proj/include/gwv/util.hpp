// Copyright 2026 The gwasverify Authors
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

#ifndef GWV_UTIL_HPP_
#define GWV_UTIL_HPP_

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace gwv {

// Process-wide worker cap. Parallel loops never change results; slots are
// written by index and merged in index order.
void set_max_threads(unsigned count);
unsigned max_threads();

// Runs fn(begin, end) over disjoint chunks of [0, n), possibly on
// multiple threads. fn must only write to per-index slots.
void parallel_for(size_t n,
                  const std::function<void(size_t, size_t)>& fn);

}  // namespace gwv

#endif  // GWV_UTIL_HPP_
