#include "asbarron/parallel.hpp"

namespace asb {

namespace {
int g_threads = 0;
}

void set_thread_count(int threads) { g_threads = threads < 0 ? 0 : threads; }

int thread_count() {
    if (g_threads > 0) return g_threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_chunks(std::size_t total, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    const std::size_t nchunks = num_chunks(total, chunk_size);
    const int workers = std::min<std::size_t>(thread_count(), nchunks);
    if (workers <= 1) {
        for (std::size_t ci = 0; ci < nchunks; ++ci)
            fn(ci, ci * chunk_size, std::min(total, (ci + 1) * chunk_size));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t ci = next.fetch_add(1);
            if (ci >= nchunks) return;
            fn(ci, ci * chunk_size, std::min(total, (ci + 1) * chunk_size));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

} // namespace asb
