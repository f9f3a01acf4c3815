/* Copyright 2026 The ptladder Authors
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ptladder {

/// Resolves a requested worker count; 0 means "all available cores".
inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Runs body(i) for i in [0, count) on `workers` threads with a static
/// block-cyclic schedule. Which thread handles which index is a pure function
/// of (count, workers), and body must only write state owned by index i, so
/// results do not depend on the worker count. The first exception thrown by
/// any body is rethrown after all threads have joined.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body, std::size_t block = 8) {
    workers = resolve_workers(workers);
    block = std::max<std::size_t>(block, 1);
    const std::size_t n_blocks = (count + block - 1) / block;
    if (workers <= 1 || n_blocks <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_blocks));

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&](unsigned w) {
        try {
            for (std::size_t b = w; b < n_blocks; b += workers) {
                const std::size_t end = std::min(count, (b + 1) * block);
                for (std::size_t i = b * block; i < end; ++i) body(i);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
    run(0);
    pool.clear();  // joins
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ptladder
