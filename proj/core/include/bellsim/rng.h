#pragma once
#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

// Deterministic stream derivation. Every Monte Carlo trial draws from an
// engine seeded by (master seed, trial index, salt), so results do not depend
// on how trials are split across workers.
namespace bellsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t salt = 0) {
    return std::mt19937_64(mix_seed(seed, trial, salt));
}

// Worker count: BELLSIM_THREADS if set, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("BELLSIM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Runs `trials` independent trials split into fixed-size chunks. Each chunk
// produces an Acc merged in chunk order, so the result is identical for any
// worker count. Acc needs a default constructor and merge(const Acc&).
template <class Acc, class Fn>
Acc run_trials(std::uint64_t trials, Fn&& per_trial) {
    constexpr std::uint64_t kChunk = 8192;
    const std::uint64_t n_chunks = (trials + kChunk - 1) / kChunk;
    std::vector<Acc> partial(n_chunks);
    unsigned workers = worker_count();
    if (workers > n_chunks) workers = static_cast<unsigned>(n_chunks ? n_chunks : 1);

    std::atomic<std::uint64_t> next{0};
    auto body = [&]() {
        for (;;) {
            std::uint64_t ci = next.fetch_add(1);
            if (ci >= n_chunks) break;
            Acc acc;
            const std::uint64_t lo = ci * kChunk;
            const std::uint64_t hi = std::min(trials, lo + kChunk);
            for (std::uint64_t t = lo; t < hi; ++t) per_trial(t, acc);
            partial[ci] = std::move(acc);
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    Acc total;
    for (auto& p : partial) total.merge(p);
    return total;
}

}  // namespace bellsim
