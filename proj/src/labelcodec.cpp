#include "iea/labelcodec.hpp"

#include <stdexcept>

namespace iea {

int LabelAlphabet::bits_per_label() const {
    if (class_count < 2) throw std::invalid_argument("LabelAlphabet: need at least 2 classes");
    int bits = 0;
    while ((1 << (bits + 1)) <= class_count) ++bits;
    if (bits_per_label_cap > 0 && bits_per_label_cap < bits) bits = bits_per_label_cap;
    return bits;
}

std::vector<int> bits_to_labels(const Bitstream& bits, const LabelAlphabet& alphabet) {
    const int bpl = alphabet.bits_per_label();
    std::vector<int> labels;
    labels.reserve((bits.size() + bpl - 1) / bpl);
    for (std::size_t t = 0; t < bits.size(); t += bpl) {
        int value = 0;
        for (int j = 0; j < bpl; ++j) {
            const std::size_t idx = t + static_cast<std::size_t>(j);
            const int bit = idx < bits.size() ? bits[idx] : 0;  // zero-pad final block
            value = (value << 1) | bit;
        }
        labels.push_back(value);
    }
    return labels;
}

LabelDecodeResult labels_to_bits(const std::vector<int>& labels, const LabelAlphabet& alphabet,
                                 std::size_t expected_bits) {
    const int bpl = alphabet.bits_per_label();
    const int usable = alphabet.usable_labels();
    if (expected_bits > labels.size() * static_cast<std::size_t>(bpl)) {
        throw std::invalid_argument("labels_to_bits: too few labels for expected bit length");
    }
    LabelDecodeResult out;
    out.bits = Bitstream(expected_bits);
    out.erasures.assign(expected_bits, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int label = labels[i];
        if (label < 0 || label >= alphabet.class_count) {
            throw std::invalid_argument("labels_to_bits: label outside the class alphabet");
        }
        const bool erased = label >= usable;
        for (int j = 0; j < bpl; ++j) {
            const std::size_t pos = i * static_cast<std::size_t>(bpl) + static_cast<std::size_t>(j);
            if (pos >= expected_bits) break;
            if (erased) {
                out.erasures[pos] = 1;
            } else {
                out.bits.set(pos, (label >> (bpl - 1 - j)) & 1);
            }
        }
    }
    return out;
}

GroupLayout GroupLayout::compute(std::size_t framed_bits, int k, int tail_bits,
                                 const LabelAlphabet& alphabet) {
    if (k < 0) throw std::invalid_argument("GroupLayout: k must be >= 0");
    GroupLayout layout;
    layout.framed_bits = framed_bits;
    layout.k = k;
    layout.tail_bits = k == 0 ? 0 : tail_bits;
    layout.alphabet = alphabet;
    return layout;
}

std::size_t GroupLayout::group_bits(int group) const {
    if (group < 0 || group >= group_count()) {
        throw std::out_of_range("GroupLayout: group index out of range");
    }
    if (group == 0) return framed_bits;
    const auto t = static_cast<std::size_t>(tail_bits);
    if (group == 1) return framed_bits + 2 * t;       // e_1 + tail systematic + tail parity 1
    if (group % 2 == 0) return framed_bits;           // e_bar_i
    return framed_bits + t;                           // e_i + tail parity i, i >= 2
}

std::size_t GroupLayout::group_labels(int group) const {
    const auto bpl = static_cast<std::size_t>(alphabet.bits_per_label());
    return (group_bits(group) + bpl - 1) / bpl;
}

std::size_t GroupLayout::group_pad_bits(int group) const {
    const auto bpl = static_cast<std::size_t>(alphabet.bits_per_label());
    return group_labels(group) * bpl - group_bits(group);
}

std::size_t GroupLayout::group_label_offset(int group) const {
    std::size_t offset = 0;
    for (int g = 0; g < group; ++g) offset += group_labels(g);
    return offset;
}

std::size_t GroupLayout::total_labels() const {
    return group_label_offset(group_count() - 1) + group_labels(group_count() - 1);
}

Bitstream group_payload(const TurboCodeword& codeword, const GroupLayout& layout, int group) {
    if (group < 0 || group >= layout.group_count()) {
        throw std::out_of_range("group_payload: group index out of range");
    }
    if (group == 0) return codeword.systematic;
    const int stream = (group - 1) / 2;  // parity stream index, 0-based
    if (group % 2 == 1) {
        Bitstream bits = codeword.parity_a.at(stream);
        if (stream == 0) bits.append(codeword.tail_a.systematic);
        bits.append(codeword.tail_a.parity.at(stream));
        return bits;
    }
    return codeword.parity_b.at(stream);
}

LabelGroups partition_groups(const TurboCodeword& codeword, const LabelAlphabet& alphabet) {
    const int tail = codeword.k == 0 ? 0 : codeword.params.tail_length();
    LabelGroups out;
    out.layout = GroupLayout::compute(codeword.systematic.size(), codeword.k, tail, alphabet);
    for (int g = 0; g < out.layout.group_count(); ++g) {
        const Bitstream bits = group_payload(codeword, out.layout, g);
        out.labels.push_back(bits_to_labels(bits, alphabet));
        out.payload_bits.push_back(bits.size());
        out.pad_bits.push_back(out.layout.group_pad_bits(g));
    }
    return out;
}

std::vector<int> LabelGroups::concatenated() const {
    std::vector<int> all;
    for (const auto& group : labels) all.insert(all.end(), group.begin(), group.end());
    return all;
}

}  // namespace iea
