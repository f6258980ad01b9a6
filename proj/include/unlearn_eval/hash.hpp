#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace uleval {

// FNV-1a, 64-bit. Used for cache keys, manifests and determinism checks;
// cache entries additionally store the full key text to rule out collisions.
constexpr std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace uleval
