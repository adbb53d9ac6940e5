#include "iea/crc32.hpp"

#include <array>
#include <stdexcept>

namespace iea {
namespace {

constexpr std::uint32_t kPolyReflected = 0xEDB88320u;

constexpr std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t crc = i;
        for (int j = 0; j < 8; ++j) {
            crc = (crc & 1) ? (crc >> 1) ^ kPolyReflected : crc >> 1;
        }
        table[i] = crc;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

}  // namespace

std::uint32_t crc32(const Bitstream& payload) {
    std::uint32_t crc = 0xFFFFFFFFu;
    const std::size_t n = payload.size();
    for (std::size_t t = 0; t < n; t += 8) {
        std::uint8_t byte = 0;
        const std::size_t chunk = (n - t < 8) ? n - t : 8;
        for (std::size_t j = 0; j < chunk; ++j) {
            byte |= static_cast<std::uint8_t>(payload[t + j] << (7 - j));
        }
        crc = (crc >> 8) ^ kCrcTable[(crc ^ byte) & 0xFFu];
    }
    return crc ^ 0xFFFFFFFFu;
}

ChecksummedMessage frame(const Bitstream& payload) {
    ChecksummedMessage out;
    out.payload = payload;
    out.checksum = crc32(payload);
    out.framed = payload;
    for (int j = 31; j >= 0; --j) {
        out.framed.push_back(static_cast<std::uint8_t>((out.checksum >> j) & 1));
    }
    return out;
}

VerifyResult verify(const Bitstream& framed) {
    if (framed.size() < kCrcBits) {
        throw std::invalid_argument("verify: framed stream shorter than 32 bits");
    }
    VerifyResult out;
    out.payload = framed.slice(0, framed.size() - kCrcBits);
    std::uint32_t received = 0;
    for (std::size_t j = 0; j < kCrcBits; ++j) {
        received = (received << 1) | framed[framed.size() - kCrcBits + j];
    }
    out.ok = (crc32(out.payload) == received);
    return out;
}

}  // namespace iea
