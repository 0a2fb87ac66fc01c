#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace slidelab {

// Base error for everything the library reports to callers.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Error raised by a pipeline stage; carries the stage name so the CLI can
// report which stage aborted.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& msg)
        : Error(stage + ": " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// Format seconds as HH:MM:SS (rounded to whole seconds).
std::string format_hhmmss(double seconds);

// Fixed-width decimal formatting, locale independent.
std::string format_fixed(double value, int precision);

// FNV-1a over a string, used to derive per-key sub-seeds.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64 mixer; combines a seed with a salt into a new seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Chunked parallel loop over [0, n). Each index must write only its own
// output slot; results are then identical for any thread count.
void parallel_for(std::size_t n, int num_threads, const std::function<void(std::size_t)>& fn);

inline int default_thread_count() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace slidelab
