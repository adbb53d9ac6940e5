#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iea/bitstream.hpp"
#include "iea/turbo.hpp"

namespace iea {

// How class labels carry bits: each label encodes floor(log2 c) bits,
// optionally capped below that (large alphabets embed more robustly with
// fewer bits per label). Labels >= usable_labels() are never produced by
// encoding.
struct LabelAlphabet {
    int class_count = 2;
    int bits_per_label_cap = 0;  // 0 = no cap

    int bits_per_label() const;
    int usable_labels() const { return 1 << bits_per_label(); }
};

std::vector<int> bits_to_labels(const Bitstream& bits, const LabelAlphabet& alphabet);

struct LabelDecodeResult {
    Bitstream bits;
    std::vector<std::uint8_t> erasures;  // 1 where the source label was unusable
};

// Inverse of bits_to_labels, truncated to expected_bits. A label outside
// the usable range (a class the encoder never assigns) marks all of its
// bit positions as erased rather than guessing.
LabelDecodeResult labels_to_bits(const std::vector<int>& labels, const LabelAlphabet& alphabet,
                                 std::size_t expected_bits);

// Bit layout of the 2k+1 groups. Group 0 carries m_c alone, so the
// integrity check on the raw read needs exactly ceil(n / bits_per_label)
// queries. Termination bits travel in the first group that needs them:
// group 1 appends the tail systematic bits and stream 1's tail parity
// after e_1, group 2i appends stream i+1's tail parity after e_{i+1}.
// Interleaved parity groups carry e_bar_i unadorned (decoder B runs
// unterminated). Every group is label-aligned via its own zero padding.
struct GroupLayout {
    std::size_t framed_bits = 0;  // n = |m_c|
    int tail_bits = 0;            // K-1, 0 when k = 0
    int k = 0;
    LabelAlphabet alphabet;

    static GroupLayout compute(std::size_t framed_bits, int k, int tail_bits,
                               const LabelAlphabet& alphabet);

    int group_count() const { return 2 * k + 1; }
    std::size_t group_bits(int group) const;    // payload bits, before padding
    std::size_t group_labels(int group) const;  // ceil(group_bits / bits_per_label)
    std::size_t group_pad_bits(int group) const;
    std::size_t group_label_offset(int group) const;  // first point index of the group
    std::size_t total_labels() const;
};

struct LabelGroups {
    GroupLayout layout;
    std::vector<std::vector<int>> labels;        // one sequence per group
    std::vector<std::size_t> payload_bits;       // per group
    std::vector<std::size_t> pad_bits;           // per group

    std::vector<int> concatenated() const;
};

// Encode-side bit content of one group (see GroupLayout).
Bitstream group_payload(const TurboCodeword& codeword, const GroupLayout& layout, int group);

LabelGroups partition_groups(const TurboCodeword& codeword, const LabelAlphabet& alphabet);

}  // namespace iea
