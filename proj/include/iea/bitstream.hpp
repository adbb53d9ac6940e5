#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace iea {

// Ordered sequence of binary symbols. One byte per bit keeps slicing,
// interleaving and LLR mapping trivial; message sizes here top out in the
// tens of kilobits, so packing would buy nothing.
class Bitstream {
public:
    Bitstream() = default;
    explicit Bitstream(std::size_t length, std::uint8_t fill = 0)
        : bits_(length, fill) {}
    Bitstream(std::initializer_list<std::uint8_t> bits) : bits_(bits) {}
    explicit Bitstream(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }

    // Checked access: indexing outside [0, size()) throws, never wraps.
    std::uint8_t at(std::size_t i) const;
    void set(std::size_t i, std::uint8_t bit);
    void flip(std::size_t i);

    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }

    void push_back(std::uint8_t bit) { bits_.push_back(bit ? 1 : 0); }
    void append(const Bitstream& other);
    Bitstream slice(std::size_t offset, std::size_t length) const;

    const std::vector<std::uint8_t>& bits() const { return bits_; }

    friend bool operator==(const Bitstream& a, const Bitstream& b) = default;

private:
    std::vector<std::uint8_t> bits_;
};

// MSB-first packing within each byte.
Bitstream bytes_to_bits(const std::vector<std::uint8_t>& bytes);

// Inverse of bytes_to_bits; requires size() divisible by 8.
std::vector<std::uint8_t> bits_to_bytes(const Bitstream& bits);

// Packs into bytes MSB-first, zero-padding a trailing partial byte.
std::vector<std::uint8_t> bits_to_bytes_padded(const Bitstream& bits);

std::string bits_to_hex(const Bitstream& bits);
Bitstream hex_to_bits(const std::string& hex);

std::size_t hamming_distance(const Bitstream& a, const Bitstream& b);

}  // namespace iea
