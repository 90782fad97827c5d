#include "dgcat/util.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace dgcat {

namespace {

size_t thread_cap()
{
    const char* env = std::getenv("DGCAT_THREADS");
    if (!env)
        return 1;
    long v = std::strtol(env, nullptr, 10);
    if (v <= 1)
        return 1;
    return static_cast<size_t>(v);
}

}  // namespace

void parallel_for(size_t n, const std::function<void(size_t)>& body)
{
    size_t workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> cursor{0};
    for (size_t t = 0; t < workers; ++t)
        pool.emplace_back([&]() {
            for (;;) {
                size_t i = cursor.fetch_add(1);
                if (i >= n)
                    return;
                body(i);
            }
        });
    for (auto& th : pool)
        th.join();
}

}  // namespace dgcat
