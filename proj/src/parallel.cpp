#include "mtlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace mtlab {

namespace {
std::atomic<int> g_workers{0};
thread_local bool t_inside_pool = false;
}  // namespace

void set_worker_count(int n) { g_workers.store(n < 0 ? 0 : n); }

int worker_count() {
    int n = g_workers.load();
    if (n == 0) {
        n = static_cast<int>(std::thread::hardware_concurrency());
        if (n == 0) n = 1;
    }
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(worker_count()), n);
    if (workers <= 1 || t_inside_pool) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            t_inside_pool = true;
            for (std::size_t i = t; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace mtlab
