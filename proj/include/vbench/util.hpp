#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vbench {

// FNV-1a 64-bit. Used for content-hash ids and media checksums; stable across
// platforms, not cryptographic.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v);
std::string hex8(std::uint64_t v);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Fixed two-decimal percent formatting. The published chance tables truncate
// some rows and round others; both are needed to reproduce them verbatim.
std::string format_fixed2(double v);
std::string format_fixed2_floor(double v);

std::string base64_encode(std::string_view data);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace vbench
