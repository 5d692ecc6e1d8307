#include "iplr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace iplr {

namespace {
std::atomic<unsigned> g_threads{0};
thread_local bool t_inside = false;  // nested loops run serially
}

void set_thread_count(unsigned n) { g_threads = n; }

unsigned thread_count() {
    unsigned n = g_threads.load();
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

std::size_t chunk_count(std::size_t n, std::size_t grain) {
    if (grain == 0) grain = 1;
    return (n + grain - 1) / grain;
}

void parallel_chunks(std::size_t n, std::size_t grain,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
    if (grain == 0) grain = 1;
    std::size_t chunks = chunk_count(n, grain);
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), chunks));
    auto run = [&](std::size_t c) { body(c * grain, std::min(n, (c + 1) * grain), c); };
    if (workers <= 1 || t_inside) {
        for (std::size_t c = 0; c < chunks; ++c) run(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            t_inside = true;
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= chunks) break;
                try {
                    run(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace iplr
