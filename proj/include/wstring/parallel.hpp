#pragma once

#include <cstddef>
#include <functional>

namespace wstring {

// Worker count from WSTRING_THREADS (0 or unset means one per hardware
// thread).  Throws ConfigError on junk values.
int thread_count();

// Runs fn(chunk_index, begin, end) over [0, n) split into a fixed number
// of chunks independent of the worker count, so per-chunk partial
// results can be combined in index order and stay deterministic.
void parallel_for_chunks(size_t n, const std::function<void(size_t, size_t, size_t)>& fn);

constexpr size_t kParallelChunks = 64;

} // namespace wstring
