#pragma once

// Deterministic sample-parallel execution.  Samples are split into fixed
// blocks by index; workers claim whole blocks, and block results are merged
// in index order after the join.  Output is therefore bit-identical for any
// thread count.

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace jonesmc {

inline unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs `body(block_state, sample_index)` for every sample in [0, samples),
/// then folds the per-block states with `merge(total, block_state)` in block
/// order.  `Block` must be default-constructible.
template <class Block, class Body, class Merge>
Block run_sample_blocks(size_t samples, Body&& body, Merge&& merge, unsigned threads = 0,
                        size_t block_size = 256) {
    const size_t nblocks = (samples + block_size - 1) / block_size;
    std::vector<Block> partial(nblocks);
    std::atomic<size_t> next{0};
    const unsigned nt = std::min<size_t>(resolve_threads(threads), nblocks ? nblocks : 1);

    auto worker = [&]() {
        while (true) {
            const size_t blk = next.fetch_add(1);
            if (blk >= nblocks) return;
            const size_t lo = blk * block_size;
            const size_t hi = std::min(samples, lo + block_size);
            for (size_t s = lo; s < hi; ++s) body(partial[blk], s);
        }
    };

    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Block total;
    for (auto& p : partial) merge(total, p);
    return total;
}

} // namespace jonesmc
