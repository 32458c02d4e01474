#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lstmsv {

using Rng = std::mt19937_64;

/// Derive the seed of a named substream from a root seed.
///
/// All randomness in the library flows from one root seed: each consumer
/// (the chain, IS² run r sample i, the forecast pass, ...) asks for
/// `derive_seed(root, tag, index)` and builds its own engine, so results do not
/// depend on the order in which substreams are consumed or on thread count.
/// The derivation is FNV-1a over the tag followed by SplitMix64 finalisation of
/// (root, tag hash, index).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                        std::uint64_t index = 0) noexcept;

[[nodiscard]] inline Rng make_rng(std::uint64_t root, std::string_view tag,
                                  std::uint64_t index = 0) {
    return Rng(derive_seed(root, tag, index));
}

/// SplitMix64 finaliser.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a hash of a byte string.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace lstmsv
