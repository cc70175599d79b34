#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>

namespace graphonlab {

// Philox4x32-10 counter-based generator. Stateless: every block of randomness
// is addressed by (key, counter), which is what makes noise streams
// reproducible per (seed, label, replica, step) independent of execution
// order or which system requests them.
struct Philox4x32 {
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// One addressable stream of standard Gaussians. The address is
// (seed, label_bits, replica, step); `index` walks along the stream.
class GaussianStream {
  public:
    GaussianStream(std::uint64_t seed, std::uint64_t label_bits, std::uint32_t replica,
                   std::uint32_t step)
        : ctr_prefix_{step, 0, static_cast<std::uint32_t>(label_bits),
                      static_cast<std::uint32_t>(label_bits >> 32)} {
        const std::uint64_t mixed =
            seed ^ (static_cast<std::uint64_t>(replica) * 0x9E3779B97F4A7C15ull);
        key_ = {static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32)};
    }

    // i-th Gaussian of the stream; each Philox block yields a Box-Muller pair.
    double normal(std::uint32_t index) const {
        auto ctr = ctr_prefix_;
        ctr[1] = index / 2;
        const auto r = Philox4x32::block(ctr, key_);
        const double u1 = to_unit((static_cast<std::uint64_t>(r[0]) << 32) | r[1]);
        const double u2 = to_unit((static_cast<std::uint64_t>(r[2]) << 32) | r[3]);
        const double radius = std::sqrt(-2.0 * std::log1p(-u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        return (index % 2 == 0) ? radius * std::cos(angle) : radius * std::sin(angle);
    }

    void fill_normal(double* out, std::uint32_t count) const {
        for (std::uint32_t i = 0; i < count; ++i) out[i] = normal(i);
    }

  private:
    static double to_unit(std::uint64_t bits) {
        // top 53 bits -> [0, 1)
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    std::array<std::uint32_t, 4> ctr_prefix_;
    std::array<std::uint32_t, 2> key_;
};

// Derives an independent 64-bit seed (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t label_to_bits(double label) { return std::bit_cast<std::uint64_t>(label); }

// Label sentinel for the common-noise stream; never collides with a real
// label because real labels are finite doubles.
inline constexpr std::uint64_t kCommonNoiseLabel = 0xFFFFFFFFFFFFFFFFull;
inline constexpr std::uint32_t kInitialDrawStep = 0xFFFFFFFFu;

}  // namespace graphonlab
