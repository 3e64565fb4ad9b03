#pragma once

#include <cstdint>
#include <random>

namespace nk6 {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream key: independent of how many other streams exist.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t index = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ domain) + index);
}

using Rng = std::mt19937_64;

// stream domains
inline constexpr std::uint64_t kPointStream = 0x706f696e74ULL;
inline constexpr std::uint64_t kFrameStream = 0x6672616d65ULL;
inline constexpr std::uint64_t kMuStream = 0x6d75ULL;
inline constexpr std::uint64_t kIdentityStream = 0x6964000000ULL;  // + identity number

}  // namespace nk6
