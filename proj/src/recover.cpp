#include "iea/recover.hpp"

#include <optional>
#include <stdexcept>

#include "json.hpp"

namespace iea {
namespace {

struct FetchedGroup {
    Bitstream bits;
    std::vector<std::uint8_t> erasures;
};

// Fetches groups lazily and keeps the decoded bits around; Algorithm 1
// never reads a group twice.
class GroupReader {
public:
    GroupReader(PredictionOracle& oracle, const AttackMetadata& metadata)
        : oracle_(oracle),
          metadata_(metadata),
          layout_(metadata.layout()),
          points_(generate_points(layout_.total_labels(), metadata.feature_dim,
                                  metadata.master_seed)) {}

    const FetchedGroup& fetch(int group) {
        if (group < 0 || group >= layout_.group_count()) {
            throw std::out_of_range("GroupReader: group index out of range");
        }
        auto& slot = cache_[static_cast<std::size_t>(group)];
        if (!slot.has_value()) {
            const std::size_t offset = layout_.group_label_offset(group);
            const std::size_t count = layout_.group_labels(group);
            std::vector<int> labels;
            labels.reserve(count);
            for (std::size_t i = 0; i < count; ++i) {
                labels.push_back(oracle_.query(offset + i,
                                               points_.col(static_cast<Eigen::Index>(offset + i))));
            }
            const LabelDecodeResult decoded =
                labels_to_bits(labels, metadata_.alphabet(), layout_.group_bits(group));
            slot = FetchedGroup{decoded.bits, decoded.erasures};
            ++groups_fetched_;
        }
        return *slot;
    }

    int groups_fetched() const { return groups_fetched_; }
    const GroupLayout& layout() const { return layout_; }

private:
    PredictionOracle& oracle_;
    const AttackMetadata& metadata_;
    GroupLayout layout_;
    Eigen::MatrixXd points_;
    std::map<std::size_t, std::optional<FetchedGroup>> cache_;
    int groups_fetched_ = 0;
};

LlrSequence slice_llr(const FetchedGroup& group, std::size_t offset, std::size_t length,
                      double crossover) {
    const Bitstream bits = group.bits.slice(offset, length);
    const std::vector<std::uint8_t> erasures(group.erasures.begin() + static_cast<std::ptrdiff_t>(offset),
                                             group.erasures.begin() +
                                                 static_cast<std::ptrdiff_t>(offset + length));
    return hard_to_llr(bits, erasures, crossover);
}

void finish(RecoveryReport& report, PredictionOracle& oracle, std::uint64_t queries_before,
            int groups) {
    const OracleStats stats = oracle.stats();
    report.queries_used = stats.queries_issued - queries_before;
    report.total_cost = static_cast<double>(report.queries_used) * stats.cost_per_query;
    report.groups_consumed = groups;
}

}  // namespace

std::string RecoveryReport::to_json_string() const {
    nlohmann::json j;
    j["verified"] = verified;
    j["message_hex"] = message_hex();
    j["message_bits"] = message.size();
    j["queries"] = queries_used;
    j["groups"] = groups_consumed;
    j["cost"] = total_cost;
    j["stages"] = nlohmann::json::array();
    for (const auto& stage : stages) {
        j["stages"].push_back({{"decoder", stage.decoder}, {"crc", stage.crc_passed}});
    }
    if (!error.empty()) j["error"] = error;
    return j.dump(2);
}

RecoveryReport recover(PredictionOracle& oracle, const AttackMetadata& metadata,
                       const RecoverOptions& options) {
    if (metadata.scheme != AttackScheme::ecc) {
        throw std::invalid_argument("recover: metadata is not an ecc scheme");
    }
    const std::uint64_t queries_before = oracle.stats().queries_issued;
    RecoveryReport report;
    GroupReader reader(oracle, metadata);
    const std::size_t n = metadata.framed_bits();
    const std::size_t tail = static_cast<std::size_t>(reader.layout().tail_bits);

    try {
        // Raw stage: the first group is m_c itself; erased positions are
        // zero-filled before the integrity check.
        const FetchedGroup& group0 = reader.fetch(0);
        {
            const VerifyResult check = verify(group0.bits);
            report.stages.push_back({"raw", check.ok});
            report.message = check.payload;
            if (check.ok) {
                report.verified = true;
                finish(report, oracle, queries_before, reader.groups_fetched());
                return report;
            }
        }

        if (metadata.k == 0) {
            finish(report, oracle, queries_before, reader.groups_fetched());
            return report;
        }
        const Trellis trellis(metadata.rsc_params());
        const Interleaver interleaver = make_interleaver(n, metadata.interleaver_seed());
        const double crossover = options.assumed_crossover;

        TurboChannelLlrs received;
        received.systematic = slice_llr(group0, 0, n, crossover);
        for (int i = 1; i <= metadata.k; ++i) {
            // Group 2i holds e_i (plus termination bits, see GroupLayout).
            const FetchedGroup& pa = reader.fetch(2 * i - 1);
            received.parity_a.push_back(slice_llr(pa, 0, n, crossover));
            if (i == 1) {
                received.tail_systematic = slice_llr(pa, n, tail, crossover);
                received.tail_parity_a.push_back(slice_llr(pa, n + tail, tail, crossover));
            } else {
                received.tail_parity_a.push_back(slice_llr(pa, n, tail, crossover));
            }

            RscChannelLlrs rsc_channel;
            rsc_channel.systematic = received.systematic;
            rsc_channel.parity = received.parity_a;
            rsc_channel.tail_systematic = received.tail_systematic;
            rsc_channel.tail_parity = received.tail_parity_a;
            const RscDecodeResult rsc_result = rsc_decode(trellis, rsc_channel);
            const VerifyResult rsc_check = verify(rsc_result.hard_bits);
            report.stages.push_back({"D" + std::to_string(i + 1), rsc_check.ok});
            report.message = rsc_check.payload;
            if (rsc_check.ok) {
                report.verified = true;
                finish(report, oracle, queries_before, reader.groups_fetched());
                return report;
            }

            // Group 2i+1 holds e_bar_i.
            const FetchedGroup& pb = reader.fetch(2 * i);
            received.parity_b.push_back(slice_llr(pb, 0, n, crossover));

            DecodeConfig config;
            config.max_iterations = options.max_iterations;
            config.assumed_crossover = crossover;
            const TurboDecodeResult turbo_result =
                turbo_decode(received, trellis, interleaver, config);
            report.stages.push_back({"T" + std::to_string(2 * i + 1), turbo_result.converged});
            report.message = turbo_result.hard_bits.slice(0, n - kCrcBits);
            if (turbo_result.converged) {
                report.verified = true;
                finish(report, oracle, queries_before, reader.groups_fetched());
                return report;
            }
        }
    } catch (const std::exception& e) {
        report.error = e.what();
    }
    finish(report, oracle, queries_before, reader.groups_fetched());
    return report;
}

RecoveryReport recover_all(PredictionOracle& oracle, const AttackMetadata& metadata,
                           const RecoverOptions& options) {
    if (metadata.scheme != AttackScheme::ecc) {
        throw std::invalid_argument("recover_all: metadata is not an ecc scheme");
    }
    const std::uint64_t queries_before = oracle.stats().queries_issued;
    RecoveryReport report;
    GroupReader reader(oracle, metadata);
    const std::size_t n = metadata.framed_bits();
    const std::size_t tail = static_cast<std::size_t>(reader.layout().tail_bits);

    try {
        for (int g = 0; g < reader.layout().group_count(); ++g) reader.fetch(g);

        const FetchedGroup& group0 = reader.fetch(0);
        if (metadata.k == 0) {
            const VerifyResult check = verify(group0.bits);
            report.stages.push_back({"raw", check.ok});
            report.message = check.payload;
            report.verified = check.ok;
            finish(report, oracle, queries_before, reader.groups_fetched());
            return report;
        }

        const double crossover = options.assumed_crossover;
        TurboChannelLlrs received;
        received.systematic = slice_llr(group0, 0, n, crossover);
        for (int i = 1; i <= metadata.k; ++i) {
            const FetchedGroup& pa = reader.fetch(2 * i - 1);
            received.parity_a.push_back(slice_llr(pa, 0, n, crossover));
            if (i == 1) {
                received.tail_systematic = slice_llr(pa, n, tail, crossover);
                received.tail_parity_a.push_back(slice_llr(pa, n + tail, tail, crossover));
            } else {
                received.tail_parity_a.push_back(slice_llr(pa, n, tail, crossover));
            }
            received.parity_b.push_back(slice_llr(reader.fetch(2 * i), 0, n, crossover));
        }

        const Trellis trellis(metadata.rsc_params());
        const Interleaver interleaver = make_interleaver(n, metadata.interleaver_seed());
        DecodeConfig config;
        config.max_iterations = options.max_iterations;
        config.assumed_crossover = crossover;
        const TurboDecodeResult result = turbo_decode(received, trellis, interleaver, config);
        report.stages.push_back({"T" + std::to_string(2 * metadata.k + 1), result.converged});
        report.message = result.hard_bits.slice(0, n - kCrcBits);
        report.verified = result.converged;
    } catch (const std::exception& e) {
        report.error = e.what();
    }
    finish(report, oracle, queries_before, reader.groups_fetched());
    return report;
}

RecoveryReport recover_direct(PredictionOracle& oracle, const AttackMetadata& metadata) {
    if (metadata.scheme != AttackScheme::direct) {
        throw std::invalid_argument("recover_direct: metadata is not a direct scheme");
    }
    const std::uint64_t queries_before = oracle.stats().queries_issued;
    RecoveryReport report;
    try {
        const std::vector<int> labels = query_group(oracle, metadata, 1);
        const LabelDecodeResult decoded =
            labels_to_bits(labels, metadata.alphabet(), metadata.payload_bits);
        report.message = decoded.bits;  // erased positions stay zero
        report.stages.push_back({"direct", false});
        finish(report, oracle, queries_before, 1);
    } catch (const std::exception& e) {
        report.error = e.what();
        finish(report, oracle, queries_before, 0);
    }
    return report;
}

}  // namespace iea
