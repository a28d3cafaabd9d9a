#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace qtrack {

// Counter-based RNG (Philox4x32-10). Every draw is a pure function of
// (master_seed, trial, stream, step, block), so trajectories are bit-identical
// no matter how trials are scheduled across workers.
namespace philox {

struct Block {
    std::array<std::uint32_t, 4> words;
};

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Block generate(std::uint64_t key, std::array<std::uint32_t, 4> ctr) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, ctr[0], hi0, lo0);
        mulhilo(kM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kW0;
        k1 += kW1;
    }
    return Block{ctr};
}

} // namespace philox

// One logical random stream of a trial, e.g. plant noise or reference noise.
// `step` indexes the simulation step the draw belongs to; each step owns an
// independent 128-bit Philox block (two doubles).
class TrialStream {
public:
    TrialStream(std::uint64_t master_seed, std::uint64_t trial,
                std::uint32_t stream)
        : key_(master_seed), trial_(trial), stream_(stream) {}

    // slot 0 or 1: uniform double in [0, 1)
    double uniform01(std::uint64_t step, int slot) const {
        return to_unit(word64(step, slot));
    }

    // uniform double in the open interval (0, 1)
    double uniform_open(std::uint64_t step, int slot) const {
        return (static_cast<double>(word64(step, slot) >> 11) + 0.5) *
               0x1.0p-53;
    }

    // standard normal via Box-Muller from the step's two slots
    double gaussian(std::uint64_t step) const {
        philox::Block b = block(step);
        std::uint64_t x0 = join(b.words[0], b.words[1]);
        std::uint64_t x1 = join(b.words[2], b.words[3]);
        double u1 = 1.0 - to_unit(x0); // (0, 1], safe for log
        double u2 = to_unit(x1);
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586477 * u2);
    }

private:
    static std::uint64_t join(std::uint32_t hi, std::uint32_t lo) {
        return (static_cast<std::uint64_t>(hi) << 32) | lo;
    }
    static double to_unit(std::uint64_t x) {
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }
    philox::Block block(std::uint64_t step) const {
        return philox::generate(
            key_, {static_cast<std::uint32_t>(step),
                   static_cast<std::uint32_t>(step >> 32),
                   static_cast<std::uint32_t>(trial_),
                   static_cast<std::uint32_t>((trial_ >> 32) ^ stream_)});
    }
    std::uint64_t word64(std::uint64_t step, int slot) const {
        philox::Block b = block(step);
        return slot == 0 ? join(b.words[0], b.words[1])
                         : join(b.words[2], b.words[3]);
    }

    std::uint64_t key_;
    std::uint64_t trial_;
    std::uint32_t stream_;
};

// Stream ids; distinct per random source so draws never collide.
inline constexpr std::uint32_t kStreamPlantNoise = 1;
inline constexpr std::uint32_t kStreamReference = 2;

} // namespace qtrack
