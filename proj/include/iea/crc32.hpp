#pragma once

#include <cstdint>

#include "iea/bitstream.hpp"

namespace iea {

// CRC-32/ISO-HDLC: reflected polynomial 0xEDB88320, init 0xFFFFFFFF,
// final XOR 0xFFFFFFFF. Check value: crc32("123456789") == 0xCBF43926.
//
// The stream is processed as-is in MSB-first byte chunks; a trailing
// partial chunk is zero-padded in its low bits for the final register
// step. Byte-aligned streams therefore match the standard byte CRC.
std::uint32_t crc32(const Bitstream& payload);

inline constexpr std::size_t kCrcBits = 32;

// Payload plus its 32-bit checksum, appended MSB-first.
struct ChecksummedMessage {
    Bitstream payload;
    std::uint32_t checksum = 0;
    Bitstream framed;  // payload ++ checksum bits
};

ChecksummedMessage frame(const Bitstream& payload);

struct VerifyResult {
    bool ok = false;
    Bitstream payload;
};

// Splits `framed` into payload and trailing 32 checksum bits and checks
// them. Throws if framed.size() < 32.
VerifyResult verify(const Bitstream& framed);

}  // namespace iea
