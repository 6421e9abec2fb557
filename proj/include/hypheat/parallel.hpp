/*
 * Copyright 2026 The hypheat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HYPHEAT_PARALLEL_HPP
#define HYPHEAT_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace hypheat {

/// Worker count for grid sweeps: HYPHEAT_THREADS when set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
int sweep_threads();

/// Runs body(worker, index) for index in [0, count) over sweep_threads()
/// workers. Indices are striped across workers; the first exception thrown by
/// any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(int, std::size_t)>& body);

}  // namespace hypheat

#endif
