#include "illusim/parallel.hpp"

#include <cstdlib>
#include <string>

#include "illusim/error.hpp"

namespace illusim {

int resolve_thread_count(int requested) {
    if (requested < 0) {
        throw ConfigError("worker count must be >= 0, got " +
                          std::to_string(requested));
    }
    if (requested == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    return requested;
}

int thread_count_from_env() {
    const char* value = std::getenv("ILLUSION_SIM_THREADS");
    if (value == nullptr || *value == '\0') return 1;
    int parsed = 0;
    try {
        parsed = std::stoi(value);
    } catch (const std::exception&) {
        throw ConfigError(std::string("ILLUSION_SIM_THREADS must be an "
                                      "integer, got '") +
                          value + "'");
    }
    return resolve_thread_count(parsed);
}

ThreadPool::ThreadPool(int workers) {
    const int total = workers < 1 ? 1 : workers;
    threads_.reserve(static_cast<std::size_t>(total - 1));
    for (int w = 1; w < total; ++w) {
        threads_.emplace_back([this, w] { worker_loop(w); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) t.join();
}

std::pair<std::size_t, std::size_t> ThreadPool::chunk_bounds(std::size_t count,
                                                             int chunk,
                                                             int total) {
    const auto c = static_cast<std::size_t>(chunk);
    const auto t = static_cast<std::size_t>(total);
    return {count * c / t, count * (c + 1) / t};
}

void ThreadPool::run(
    std::size_t count,
    const std::function<void(std::size_t, std::size_t, int)>& fn) {
    if (count == 0) return;
    const int total = workers();
    if (total == 1) {
        fn(0, count, 0);
        return;
    }
    {
        std::lock_guard lock(mutex_);
        task_ = {count, &fn};
        pending_ = total - 1;
        ++generation_;
    }
    start_cv_.notify_all();

    const auto [begin, end] = chunk_bounds(count, 0, total);
    if (begin < end) fn(begin, end, 0);

    std::unique_lock lock(mutex_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    task_ = {};
}

void ThreadPool::worker_loop(int chunk_index) {
    std::uint64_t seen = 0;
    for (;;) {
        Task task;
        {
            std::unique_lock lock(mutex_);
            start_cv_.wait(lock, [this, seen] {
                return stopping_ || generation_ != seen;
            });
            if (stopping_) return;
            seen = generation_;
            task = task_;
        }
        const auto [begin, end] =
            chunk_bounds(task.count, chunk_index, workers());
        if (begin < end) (*task.fn)(begin, end, chunk_index);
        {
            std::lock_guard lock(mutex_);
            --pending_;
        }
        done_cv_.notify_one();
    }
}

}  // namespace illusim
