#include "nullest/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace nullest {

namespace {

std::atomic<std::size_t> g_override{0};
thread_local bool t_inside_parallel = false;

std::size_t env_cap() {
    const char* raw = std::getenv("NULL_EST_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    try {
        const long v = std::stol(raw);
        return v > 0 ? static_cast<std::size_t>(v) : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

std::size_t worker_count() {
    if (const std::size_t o = g_override.load(); o > 0) return o;
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const std::size_t cap = env_cap(); cap > 0) hw = std::min(hw, cap);
    return hw;
}

void set_worker_count(std::size_t workers) { g_override.store(workers); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1 || t_inside_parallel) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::size_t error_index = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;

    auto worker = [&] {
        t_inside_parallel = true;
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
        t_inside_parallel = false;
    };

    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(worker);
    worker();
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace nullest
