#include "iea/bitstream.hpp"

#include <stdexcept>

namespace iea {

std::uint8_t Bitstream::at(std::size_t i) const {
    if (i >= bits_.size()) {
        throw std::out_of_range("Bitstream index " + std::to_string(i) +
                                " out of range [0, " + std::to_string(bits_.size()) + ")");
    }
    return bits_[i];
}

void Bitstream::set(std::size_t i, std::uint8_t bit) {
    if (i >= bits_.size()) {
        throw std::out_of_range("Bitstream::set index out of range");
    }
    bits_[i] = bit ? 1 : 0;
}

void Bitstream::flip(std::size_t i) {
    if (i >= bits_.size()) {
        throw std::out_of_range("Bitstream::flip index out of range");
    }
    bits_[i] ^= 1;
}

void Bitstream::append(const Bitstream& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

Bitstream Bitstream::slice(std::size_t offset, std::size_t length) const {
    if (offset + length > bits_.size()) {
        throw std::out_of_range("Bitstream::slice out of range");
    }
    return Bitstream(std::vector<std::uint8_t>(bits_.begin() + offset,
                                               bits_.begin() + offset + length));
}

Bitstream bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    Bitstream out;
    for (std::uint8_t byte : bytes) {
        for (int j = 7; j >= 0; --j) out.push_back((byte >> j) & 1);
    }
    return out;
}

std::vector<std::uint8_t> bits_to_bytes(const Bitstream& bits) {
    if (bits.size() % 8 != 0) {
        throw std::invalid_argument("bits_to_bytes: length not divisible by 8");
    }
    return bits_to_bytes_padded(bits);
}

std::vector<std::uint8_t> bits_to_bytes_padded(const Bitstream& bits) {
    std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (7 - i % 8));
    }
    return out;
}

std::string bits_to_hex(const Bitstream& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::uint8_t byte : bits_to_bytes_padded(bits)) {
        out += digits[byte >> 4];
        out += digits[byte & 0xF];
    }
    return out;
}

Bitstream hex_to_bits(const std::string& hex) {
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("hex_to_bits: odd-length hex string");
    }
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw std::invalid_argument("hex_to_bits: invalid hex digit");
    };
    std::vector<std::uint8_t> bytes(hex.size() / 2);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<std::uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
    }
    return bytes_to_bits(bytes);
}

std::size_t hamming_distance(const Bitstream& a, const Bitstream& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("hamming_distance: length mismatch");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1 : 0;
    return d;
}

}  // namespace iea
