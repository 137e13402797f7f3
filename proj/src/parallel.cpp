#include "sheath/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sheath {

namespace {

int env_thread_count() {
    const char* env = std::getenv("SHEATHSIM_THREADS");
    if (env == nullptr) {
        return 1;
    }
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

std::atomic<int> override_threads{0};

} // namespace

int thread_count() {
    static const int from_env = env_thread_count();
    const int forced = override_threads.load();
    return forced > 0 ? forced : from_env;
}

void set_thread_count(int n) { override_threads.store(n > 0 ? n : 0); }

void parallel_for(long n, const std::function<void(long, long)>& body) {
    if (n <= 0) {
        return;
    }
    const long workers = std::min<long>(thread_count(), n);
    if (workers <= 1) {
        body(0, n);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(workers) - 1);
    const long chunk = (n + workers - 1) / workers;
    auto run_chunk = [&](long begin, long end) {
        try {
            body(begin, end);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };
    for (long w = 1; w < workers; ++w) {
        const long begin = w * chunk;
        const long end = std::min(n, begin + chunk);
        if (begin < end) {
            threads.emplace_back(run_chunk, begin, end);
        }
    }
    run_chunk(0, std::min(n, chunk));
    threads.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace sheath
