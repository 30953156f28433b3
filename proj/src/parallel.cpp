#include "wstring/parallel.hpp"
#include "wstring/errors.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace wstring {

int thread_count() {
    const char* env = std::getenv("WSTRING_THREADS");
    if (!env || !*env) return std::max(1u, std::thread::hardware_concurrency());
    char* tail = nullptr;
    const long parsed = std::strtol(env, &tail, 10);
    if (*tail != '\0' || parsed < 0 || parsed > 4096)
        throw ConfigError(std::string("WSTRING_THREADS must be a small nonnegative integer, got '") +
                          env + "'");
    if (parsed == 0) return std::max(1u, std::thread::hardware_concurrency());
    return static_cast<int>(parsed);
}

void parallel_for_chunks(size_t n, const std::function<void(size_t, size_t, size_t)>& fn) {
    if (n == 0) return;
    const size_t chunks = std::min(n, kParallelChunks);
    const int workers = std::min<int>(thread_count(), static_cast<int>(chunks));
    auto run_chunk = [&](size_t c) {
        const size_t begin = n * c / chunks;
        const size_t end = n * (c + 1) / chunks;
        fn(c, begin, end);
    };
    if (workers <= 1) {
        for (size_t c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) run_chunk(c);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace wstring
