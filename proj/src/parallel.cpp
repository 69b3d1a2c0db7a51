#include "refinery/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace refinery {

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("REFINERY_THREADS")) {
        try {
            long cap = std::stol(env);
            if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
        } catch (const std::exception&) {
        }
    }
    return hw;
}

void parallel_for(size_t n, const std::function<void(size_t)>& body) {
    unsigned workers = std::min<size_t>(worker_count(), n);
    if (workers <= 1 || n < 64) {
        for (size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace refinery
