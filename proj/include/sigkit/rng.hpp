#pragma once

#include <cstdint>

namespace sigkit {

// Counter-based generator (Philox 2x64, 10 rounds). A stream is identified by
// (master_seed, stream_index) and distinct stream indices select disjoint
// counter blocks, so any number of substreams can be derived in O(1) without
// touching each other. Results therefore never depend on how work is split
// across threads, only on which stream a task was given.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : key_(master_seed), stream_(stream_index) {}

    std::uint64_t next_u64() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        std::uint64_t c0 = pos_++;
        std::uint64_t c1 = stream_;
        std::uint64_t k = key_;
        for (int r = 0; r < 10; ++r) round(c0, c1, k);
        spare_ = c1;
        have_spare_ = true;
        return c0;
    }

    // Uniform on [0,1) with 53-bit resolution.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0,1); safe to feed into log() and
    // quantile transforms.
    double next_open_uniform() {
        return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
    }

    // Uniform integer in [0, bound), bound > 0. Multiply-shift map; the bias
    // is below bound / 2^64, far under anything observable here.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    std::uint64_t master_seed() const { return key_; }
    std::uint64_t stream_index() const { return stream_; }

private:
    static void round(std::uint64_t& c0, std::uint64_t& c1, std::uint64_t& k) {
        unsigned __int128 prod =
            static_cast<unsigned __int128>(0xD2B74407B1CE6E93ULL) * c0;
        std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
        std::uint64_t lo = static_cast<std::uint64_t>(prod);
        c0 = hi ^ k ^ c1;
        c1 = lo;
        k += 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t pos_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
};

inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t task_index) {
    return RngStream(master_seed, task_index);
}

// First word of a substream; used to seed nested generators (per-pair seeds
// in comparison tables, per-chunk child streams inside resampling loops).
inline std::uint64_t derived_seed(std::uint64_t master_seed, std::uint64_t task_index) {
    return RngStream(master_seed, task_index).next_u64();
}

}  // namespace sigkit
