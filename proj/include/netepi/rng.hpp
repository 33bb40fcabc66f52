#pragma once

// Philox4x32-10 counter-based generator. Every random decision in the
// program is addressed by (key, item, stream, domain), so results do not
// depend on how many draws happened before or on which thread made them.

#include <array>
#include <cstdint>

namespace netepi {

enum class RngDomain : std::uint32_t {
    Coins = 0,
    StaticContacts = 1,
    PerStepContacts = 2,
};

class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    constexpr explicit Philox4x32(Key key) : key_(key) {}
    constexpr explicit Philox4x32(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
    {
    }

    constexpr Block operator()(Block ctr) const
    {
        Key k = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                k[0] += kWeyl0;
                k[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    /// Uniform double in [0,1) with 53 random bits.
    constexpr double uniform(std::uint64_t item, std::uint32_t stream, RngDomain domain) const
    {
        const Block out = (*this)({static_cast<std::uint32_t>(item),
                                   static_cast<std::uint32_t>(item >> 32), stream,
                                   static_cast<std::uint32_t>(domain)});
        const std::uint64_t bits = (std::uint64_t{out[0]} << 32 | out[1]) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

    /// A Bernoulli(p) decision; p = 0 never fires and p = 1 always fires.
    constexpr bool bernoulli(double p, std::uint64_t item, std::uint32_t stream,
                             RngDomain domain) const
    {
        return uniform(item, stream, domain) < p;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

    Key key_;
};

} // namespace netepi
