#include "mabhet/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mabhet {

unsigned
ThreadCount()
{
    if (const char* env = std::getenv("MABHET_THREADS"))
    {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0)
        {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void
ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(ThreadCount(), n));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            body(i);
        }
        return;
    }

    constexpr std::size_t kChunk = 64;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&] {
        for (;;)
        {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= n)
            {
                return;
            }
            const std::size_t end = std::min(n, begin + kChunk);
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                {
                    body(i);
                }
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next.store(n);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w)
    {
        pool.emplace_back(run);
    }
    run();
    pool.clear();
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

} // namespace mabhet
