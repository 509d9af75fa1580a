#pragma once

// Small shared utilities: stable digests and deterministic chunked parallelism.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace tamelab {

/// 64-bit FNV-1a. Stable across platforms; used for parameter and file digests.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string digest_of(std::string_view bytes) { return hex64(fnv1a64(bytes)); }

inline std::size_t resolve_threads(std::size_t hint) {
    if (hint != 0) return hint;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Splits [0, n) into at most `threads` contiguous chunks and runs
/// fn(chunk, begin, end) on each. Chunk boundaries depend only on n and the
/// chunk count, so callers merging per-chunk results in chunk order get the
/// same answer for every thread count as long as their merge is order-aware.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(resolve_threads(threads), n));
    if (threads == 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = n * t / threads;
        const std::size_t end = n * (t + 1) / threads;
        pool.emplace_back([&, t, begin, end] {
            try {
                fn(t, begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Number of chunks parallel_chunks will use for n items.
inline std::size_t chunk_count(std::size_t n, std::size_t threads) {
    return std::max<std::size_t>(1, std::min(resolve_threads(threads), n));
}

}  // namespace tamelab
