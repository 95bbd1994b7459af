#pragma once

#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cadkit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void warn(const std::string& msg) {
    std::cerr << "cadkit: warning: " << msg << "\n";
}

// FNV-1a, used for content fingerprints and per-example seed streams.
inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace cadkit
