#ifndef NOMA_ALOHA_RANDOM_HPP
#define NOMA_ALOHA_RANDOM_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace noma_aloha {

/// Counter-based generator: word k of stream s is mix(key + (s * 2^40 + k) * golden),
/// with mix the SplitMix64 finalizer. Both mix and multiplication by an odd
/// constant are bijections on 64-bit words, so distinct (stream, counter)
/// pairs never produce the same internal state and streams cannot overlap as
/// long as each draws fewer than 2^40 words.
class CounterStream {
public:
    using result_type = std::uint64_t;

    static constexpr int counter_bits = 40;
    static constexpr std::uint64_t max_streams = std::uint64_t{1} << (64 - counter_bits);

    CounterStream(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL))
    {
        if (stream >= max_streams)
            throw std::out_of_range("CounterStream: stream index too large");
        base_ = stream << counter_bits;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        const std::uint64_t x = base_ | (counter_++ & ((std::uint64_t{1} << counter_bits) - 1));
        return mix(key_ + x * golden);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1).
    double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    std::uint64_t draws() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace noma_aloha

#endif
