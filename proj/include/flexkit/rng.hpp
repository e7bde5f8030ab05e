#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace flexkit {

// SplitMix64 mixing step, used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded random stream built on std::mt19937_64 (whose output sequence is
// pinned down by the standard, so streams are identical across platforms).
// Uniform doubles come from the top 53 bits; normals use Box-Muller.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = 1.0 - uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Independent sub-stream `stream_id` of the generator rooted at `root_seed`.
inline RngStream make_substream(std::uint64_t root_seed, std::uint64_t stream_id) {
    return RngStream(splitmix64(root_seed + 0x632be59bd9b4e019ULL * (stream_id + 1)));
}

}  // namespace flexkit
