#include "doctest.h"

#include <stdexcept>

#include "iea/labelcodec.hpp"
#include "iea/prng.hpp"

using namespace iea;

namespace {

Bitstream random_bits(std::size_t n, Xoshiro256StarStar& rng) {
    Bitstream out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(rng.next() & 1));
    return out;
}

TurboCodeword table1_codeword(Xoshiro256StarStar& rng) {
    const ChecksummedMessage mc = frame(random_bits(4000, rng));
    return turbo_encode(mc, kDefaultRscParams, 9);
}

}  // namespace

TEST_CASE("bits-per-label follows floor(log2 c) with an optional cap") {
    CHECK(LabelAlphabet{2, 0}.bits_per_label() == 1);
    CHECK(LabelAlphabet{8, 0}.bits_per_label() == 3);
    CHECK(LabelAlphabet{10, 0}.bits_per_label() == 3);
    CHECK(LabelAlphabet{10, 0}.usable_labels() == 8);
    CHECK(LabelAlphabet{530, 0}.bits_per_label() == 9);
    CHECK(LabelAlphabet{530, 5}.bits_per_label() == 5);   // the robustness cap
    CHECK(LabelAlphabet{530, 5}.usable_labels() == 32);
    const LabelAlphabet degenerate{1, 0};
    CHECK_THROWS_AS(degenerate.bits_per_label(), std::invalid_argument);
}

TEST_CASE("three-bit blocks map to the documented labels for c = 10") {
    const LabelAlphabet alphabet{10, 0};
    CHECK(bits_to_labels(Bitstream{0, 0, 0}, alphabet) == std::vector<int>{0});
    CHECK(bits_to_labels(Bitstream{0, 0, 1}, alphabet) == std::vector<int>{1});
    CHECK(bits_to_labels(Bitstream{1, 1, 1}, alphabet) == std::vector<int>{7});
}

TEST_CASE("encoding never emits an unusable label") {
    Xoshiro256StarStar rng(5);
    for (int classes : {2, 8, 10, 530}) {
        const LabelAlphabet alphabet{classes, classes == 530 ? 5 : 0};
        const std::vector<int> labels = bits_to_labels(random_bits(999, rng), alphabet);
        for (int label : labels) {
            CHECK(label >= 0);
            CHECK(label < alphabet.usable_labels());
        }
    }
}

TEST_CASE("label counts match the query arithmetic") {
    CHECK(bits_to_labels(Bitstream(4032), LabelAlphabet{10, 0}).size() == 1344);
    CHECK(bits_to_labels(Bitstream(288), LabelAlphabet{2, 0}).size() == 288);
    CHECK(bits_to_labels(Bitstream(4000), LabelAlphabet{10, 0}).size() == 1334);
}

TEST_CASE("labels roundtrip back to bits with no erasures") {
    Xoshiro256StarStar rng(7);
    for (int classes : {2, 8, 10}) {
        const LabelAlphabet alphabet{classes, 0};
        for (int trial = 0; trial < 30; ++trial) {
            const Bitstream bits = random_bits(1 + rng.bounded(200), rng);
            const LabelDecodeResult back =
                labels_to_bits(bits_to_labels(bits, alphabet), alphabet, bits.size());
            CHECK(back.bits == bits);
            for (auto e : back.erasures) CHECK(e == 0);
        }
    }
}

TEST_CASE("an unusable label erases exactly its bit positions") {
    const LabelAlphabet alphabet{10, 0};
    std::vector<int> labels = bits_to_labels(Bitstream(9), alphabet);  // three labels
    labels[1] = 9;  // class 9 is never used by the encoder
    const LabelDecodeResult back = labels_to_bits(labels, alphabet, 9);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(back.erasures[i] == (i >= 3 && i < 6 ? 1 : 0));
    }
}

TEST_CASE("a wrong but usable label perturbs at most its own bits") {
    Xoshiro256StarStar rng(9);
    const LabelAlphabet alphabet{10, 0};
    const Bitstream bits = random_bits(30, rng);
    std::vector<int> labels = bits_to_labels(bits, alphabet);
    labels[4] ^= 0b101;  // still < 8
    const LabelDecodeResult back = labels_to_bits(labels, alphabet, 30);
    for (auto e : back.erasures) CHECK(e == 0);
    for (std::size_t i = 0; i < 30; ++i) {
        if (i / 3 != 4) CHECK(back.bits[i] == bits[i]);
    }
    CHECK(hamming_distance(back.bits, bits) <= 3);
}

TEST_CASE("labels_to_bits validates its inputs") {
    const LabelAlphabet alphabet{10, 0};
    CHECK_THROWS_AS(labels_to_bits({0, 1}, alphabet, 7), std::invalid_argument);
    CHECK_THROWS_AS(labels_to_bits({0, 10}, alphabet, 6), std::invalid_argument);
    CHECK_THROWS_AS(labels_to_bits({-1}, alphabet, 3), std::invalid_argument);
}

TEST_CASE("group layout of the Table-1 configuration") {
    Xoshiro256StarStar rng(11);
    const TurboCodeword cw = table1_codeword(rng);
    const LabelGroups groups = partition_groups(cw, LabelAlphabet{10, 0});
    CHECK(groups.layout.group_count() == 5);
    // group 0 is m_c alone; termination bits ride with the parity groups
    CHECK(groups.layout.group_labels(0) == 1344);
    CHECK(groups.layout.group_labels(1) == 1346);
    CHECK(groups.layout.group_labels(2) == 1344);
    CHECK(groups.layout.group_labels(3) == 1345);
    CHECK(groups.layout.group_labels(4) == 1344);
    CHECK(groups.layout.total_labels() == 6723);
    CHECK(groups.layout.group_label_offset(1) == 1344);
    CHECK(groups.labels.size() == 5);
    for (int g = 0; g < 5; ++g) {
        CHECK(groups.labels[static_cast<std::size_t>(g)].size() == groups.layout.group_labels(g));
        CHECK(groups.pad_bits[static_cast<std::size_t>(g)] ==
              groups.layout.group_pad_bits(g));
    }
}

TEST_CASE("degenerate k = 0 layout is a single group") {
    const GroupLayout layout = GroupLayout::compute(96, 0, 0, LabelAlphabet{8, 0});
    CHECK(layout.group_count() == 1);
    CHECK(layout.group_labels(0) == 32);
    CHECK(layout.total_labels() == 32);
}

TEST_CASE("per-group decoding reproduces the codeword blocks exactly") {
    Xoshiro256StarStar rng(13);
    const ChecksummedMessage mc = frame(random_bits(500, rng));
    const TurboCodeword cw = turbo_encode(mc, kDefaultRscParams, 21);
    const LabelAlphabet alphabet{10, 0};
    const LabelGroups groups = partition_groups(cw, alphabet);
    for (int g = 0; g < groups.layout.group_count(); ++g) {
        const Bitstream expected = group_payload(cw, groups.layout, g);
        const LabelDecodeResult back = labels_to_bits(groups.labels[static_cast<std::size_t>(g)],
                                                      alphabet, groups.layout.group_bits(g));
        CHECK(back.bits == expected);
    }
    // group 1 carries e_1 then the tail bits
    const Bitstream g1 = group_payload(cw, groups.layout, 1);
    CHECK(g1.slice(0, mc.framed.size()) == cw.parity_a[0]);
    CHECK(g1.slice(mc.framed.size(), 3) == cw.tail_a.systematic);
    CHECK(g1.slice(mc.framed.size() + 3, 3) == cw.tail_a.parity[0]);
    // group 3 carries e_2 then its tail parity
    const Bitstream g3 = group_payload(cw, groups.layout, 3);
    CHECK(g3.slice(0, mc.framed.size()) == cw.parity_a[1]);
    CHECK(g3.slice(mc.framed.size(), 3) == cw.tail_a.parity[1]);
    // interleaved parity groups are unadorned
    CHECK(group_payload(cw, groups.layout, 2) == cw.parity_b[0]);
    CHECK(group_payload(cw, groups.layout, 4) == cw.parity_b[1]);
}

TEST_CASE("corrupting one group never perturbs another group's bits") {
    Xoshiro256StarStar rng(17);
    const ChecksummedMessage mc = frame(random_bits(300, rng));
    const TurboCodeword cw = turbo_encode(mc, kDefaultRscParams, 3);
    const LabelAlphabet alphabet{10, 0};
    const LabelGroups groups = partition_groups(cw, alphabet);
    for (int corrupted_group = 0; corrupted_group < 5; ++corrupted_group) {
        LabelGroups damaged = groups;
        for (auto& label : damaged.labels[static_cast<std::size_t>(corrupted_group)]) {
            label = static_cast<int>(rng.bounded(8));
        }
        for (int g = 0; g < 5; ++g) {
            if (g == corrupted_group) continue;
            const LabelDecodeResult back = labels_to_bits(
                damaged.labels[static_cast<std::size_t>(g)], alphabet, groups.layout.group_bits(g));
            CHECK(back.bits == group_payload(cw, groups.layout, g));
        }
    }
}
