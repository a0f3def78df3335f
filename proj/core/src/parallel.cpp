#include "exhawkes/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace exhawkes {

unsigned thread_limit() {
    static const unsigned limit = [] {
        unsigned n = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("EXPOSURE_HAWKES_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) n = std::min<long>(v, 1024);
        }
        return n;
    }();
    return limit;
}

namespace {
thread_local bool in_parallel_region = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const unsigned workers = thread_limit();
    if (workers == 1 || n < 2 || in_parallel_region) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    // Chunk layout depends only on n so results never depend on the worker count.
    const std::size_t n_chunks = std::min<std::size_t>(n, 64);
    const std::size_t chunk = (n + n_chunks - 1) / n_chunks;

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        in_parallel_region = true;
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            const std::size_t lo = c * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        }
        in_parallel_region = false;
    };

    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(std::min<std::size_t>(workers, n_chunks)) - 1;
    pool.reserve(spawn);
    for (unsigned i = 0; i < spawn; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

} // namespace exhawkes
