#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "iea/crc32.hpp"
#include "iea/labelcodec.hpp"
#include "iea/turbo.hpp"

namespace iea {

enum class AttackScheme { ecc, direct };

std::string to_string(AttackScheme scheme);
AttackScheme attack_scheme_from_string(const std::string& name);

// Everything the recovery side needs, besides the oracle, to regenerate
// the attack points and the group structure. Serialized as JSON; this
// file is the only artifact shared between embedding and recovery.
struct AttackMetadata {
    AttackScheme scheme = AttackScheme::ecc;
    std::uint64_t master_seed = 0;
    int feature_dim = 20;
    int class_count = 10;
    std::size_t payload_bits = 0;  // |m| before the CRC
    std::string rsc_params_id = kDefaultRscParams.id();
    int k = 2;
    int bits_per_label_cap = 0;

    LabelAlphabet alphabet() const { return {class_count, bits_per_label_cap}; }
    RscParams rsc_params() const { return RscParams::from_id(rsc_params_id); }
    std::uint64_t interleaver_seed() const { return derive_interleaver_seed(master_seed); }
    std::size_t framed_bits() const { return payload_bits + kCrcBits; }

    // Group structure implied by the metadata (ecc scheme). For the
    // direct scheme the dataset is one group of direct_label_count().
    GroupLayout layout() const;
    std::size_t direct_label_count() const;
    std::size_t point_count() const;

    std::string to_json_string() const;
    static AttackMetadata from_json_string(const std::string& text);
};

// Seeded random points with the labels that carry the encoded message.
struct AttackDataset {
    Eigen::MatrixXd points;        // feature_dim x n, column per point
    std::vector<int> labels;       // n assigned labels
    std::vector<int> group_index;  // n group ids in [1, 2k+1]

    std::size_t size() const { return labels.size(); }
};

// Coordinates drawn i.i.d. uniform on [0,1) from the toolkit PRNG, point
// by point (column-major: all coordinates of point 0, then point 1, ...).
// Bit-exact across platforms.
Eigen::MatrixXd generate_points(std::size_t n, int feature_dim, std::uint64_t master_seed);

AttackDataset build_attack_dataset(const TurboCodeword& codeword, const LabelAlphabet& alphabet,
                                   const AttackMetadata& metadata);

// Direct-encoding dataset (the DE baseline): labels carry the message
// bits with no checksum and no coding, one group.
AttackDataset build_direct_attack_dataset(const Bitstream& message, const AttackMetadata& metadata);

// Full embed-side construction from a message: frame, encode, label.
AttackDataset build_dataset_for_message(const Bitstream& message, const AttackMetadata& metadata);

}  // namespace iea
