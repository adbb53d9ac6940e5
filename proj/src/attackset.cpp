#include "iea/attackset.hpp"

#include <stdexcept>

#include "iea/prng.hpp"
#include "json.hpp"

namespace iea {

std::string to_string(AttackScheme scheme) {
    return scheme == AttackScheme::ecc ? "ecc" : "direct";
}

AttackScheme attack_scheme_from_string(const std::string& name) {
    if (name == "ecc") return AttackScheme::ecc;
    if (name == "direct") return AttackScheme::direct;
    throw std::invalid_argument("unknown attack scheme '" + name + "'");
}

GroupLayout AttackMetadata::layout() const {
    const int tail = k == 0 ? 0 : rsc_params().tail_length();
    return GroupLayout::compute(framed_bits(), k, tail, alphabet());
}

std::size_t AttackMetadata::direct_label_count() const {
    const auto bpl = static_cast<std::size_t>(alphabet().bits_per_label());
    return (payload_bits + bpl - 1) / bpl;
}

std::size_t AttackMetadata::point_count() const {
    return scheme == AttackScheme::direct ? direct_label_count() : layout().total_labels();
}

std::string AttackMetadata::to_json_string() const {
    nlohmann::json j;
    j["version"] = 1;
    j["scheme"] = to_string(scheme);
    j["master_seed"] = master_seed;
    j["feature_dim"] = feature_dim;
    j["class_count"] = class_count;
    j["payload_bits"] = payload_bits;
    j["rsc_params"] = rsc_params_id;
    j["k"] = k;
    j["bits_per_label_cap"] = bits_per_label_cap;
    return j.dump(2);
}

AttackMetadata AttackMetadata::from_json_string(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) {
        throw std::invalid_argument("AttackMetadata: unsupported version");
    }
    AttackMetadata m;
    m.scheme = attack_scheme_from_string(j.at("scheme").get<std::string>());
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.feature_dim = j.at("feature_dim").get<int>();
    m.class_count = j.at("class_count").get<int>();
    m.payload_bits = j.at("payload_bits").get<std::size_t>();
    m.rsc_params_id = j.at("rsc_params").get<std::string>();
    m.k = j.at("k").get<int>();
    m.bits_per_label_cap = j.at("bits_per_label_cap").get<int>();
    if (m.k < 0) throw std::invalid_argument("AttackMetadata: k must be >= 0");
    if (m.k > 0 && m.k != m.rsc_params().stream_count()) {
        throw std::invalid_argument("AttackMetadata: k does not match the RSC parity streams");
    }
    return m;
}

Eigen::MatrixXd generate_points(std::size_t n, int feature_dim, std::uint64_t master_seed) {
    if (feature_dim < 1) throw std::invalid_argument("generate_points: feature_dim must be >= 1");
    Eigen::MatrixXd points(feature_dim, static_cast<Eigen::Index>(n));
    Xoshiro256StarStar rng(master_seed);
    for (std::size_t i = 0; i < n; ++i) {
        for (int d = 0; d < feature_dim; ++d) {
            points(d, static_cast<Eigen::Index>(i)) = rng.uniform01();
        }
    }
    return points;
}

AttackDataset build_attack_dataset(const TurboCodeword& codeword, const LabelAlphabet& alphabet,
                                   const AttackMetadata& metadata) {
    if (metadata.scheme != AttackScheme::ecc) {
        throw std::invalid_argument("build_attack_dataset: metadata is not an ecc scheme");
    }
    if (codeword.systematic.size() != metadata.framed_bits()) {
        throw std::invalid_argument("build_attack_dataset: codeword length disagrees with metadata");
    }
    if (codeword.k != metadata.k) {
        throw std::invalid_argument("build_attack_dataset: codeword k disagrees with metadata");
    }
    const LabelGroups groups = partition_groups(codeword, alphabet);
    AttackDataset ds;
    ds.labels = groups.concatenated();
    ds.group_index.reserve(ds.labels.size());
    for (int g = 0; g < groups.layout.group_count(); ++g) {
        ds.group_index.insert(ds.group_index.end(), groups.layout.group_labels(g), g + 1);
    }
    ds.points = generate_points(ds.labels.size(), metadata.feature_dim, metadata.master_seed);
    return ds;
}

AttackDataset build_direct_attack_dataset(const Bitstream& message, const AttackMetadata& metadata) {
    if (metadata.scheme != AttackScheme::direct) {
        throw std::invalid_argument("build_direct_attack_dataset: metadata is not a direct scheme");
    }
    if (message.size() != metadata.payload_bits) {
        throw std::invalid_argument("build_direct_attack_dataset: message length disagrees with metadata");
    }
    AttackDataset ds;
    ds.labels = bits_to_labels(message, metadata.alphabet());
    ds.group_index.assign(ds.labels.size(), 1);
    ds.points = generate_points(ds.labels.size(), metadata.feature_dim, metadata.master_seed);
    return ds;
}

AttackDataset build_dataset_for_message(const Bitstream& message, const AttackMetadata& metadata) {
    if (message.size() != metadata.payload_bits) {
        throw std::invalid_argument("build_dataset_for_message: message length disagrees with metadata");
    }
    if (metadata.scheme == AttackScheme::direct) {
        return build_direct_attack_dataset(message, metadata);
    }
    const ChecksummedMessage mc = frame(message);
    TurboCodeword cw;
    if (metadata.k == 0) {
        cw = TurboCodeword::systematic_only(mc.framed);
    } else {
        cw = turbo_encode(mc, metadata.rsc_params(), metadata.interleaver_seed());
    }
    return build_attack_dataset(cw, metadata.alphabet(), metadata);
}

}  // namespace iea
