#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace illusim {

/// Resolves a requested worker count: 0 means auto (hardware concurrency),
/// anything else is used as given (minimum 1).
int resolve_thread_count(int requested);

/// Reads ILLUSION_SIM_THREADS; unset means 1 worker, 0 means auto.
int thread_count_from_env();

/// A fixed pool running index ranges with deterministic chunk boundaries.
/// Chunk c of a count-sized range is [c*count/W, (c+1)*count/W), so the
/// split never depends on timing. Callers must only write disjoint data
/// per index; under that contract results are identical for any worker
/// count.
class ThreadPool {
public:
    explicit ThreadPool(int workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    int workers() const { return static_cast<int>(threads_.size()) + 1; }

    /// Runs fn(begin, end, chunk_index) over [0, count); blocks until done.
    /// The calling thread executes chunk 0.
    void run(std::size_t count,
             const std::function<void(std::size_t, std::size_t, int)>& fn);

private:
    struct Task {
        std::size_t count = 0;
        const std::function<void(std::size_t, std::size_t, int)>* fn = nullptr;
    };

    void worker_loop(int chunk_index);
    static std::pair<std::size_t, std::size_t> chunk_bounds(std::size_t count,
                                                            int chunk,
                                                            int total);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    Task task_;
    std::uint64_t generation_ = 0;
    int pending_ = 0;
    bool stopping_ = false;
};

}  // namespace illusim
