#pragma once

#include <string>
#include <vector>

#include "iea/attackset.hpp"
#include "iea/oracle.hpp"

namespace iea {

struct StageRecord {
    std::string decoder;  // "raw", "D2", "T3", "D3", "T5", ... or "direct"
    bool crc_passed = false;
};

struct RecoveryReport {
    Bitstream message;  // recovered payload bits (best effort when unverified)
    bool verified = false;
    std::uint64_t queries_used = 0;
    int groups_consumed = 0;
    std::vector<StageRecord> stages;
    double total_cost = 0.0;
    std::string error;  // nonempty when the oracle failed mid-run

    std::string message_hex() const { return bits_to_hex(message); }
    std::string to_json_string() const;
};

struct RecoverOptions {
    // Crossover probability assumed by the hard-to-LLR mapping. Use the
    // configured channel rate when it is known, 0.05 otherwise.
    double assumed_crossover = 0.05;
    int max_iterations = 10;
};

// Adaptive group-by-group recovery: read group 1 and integrity-check it
// raw; then alternate partial RSC decoders D_{i+1} (after group 2i) and
// turbo decoders T_{2i+1} (after group 2i+1) until the CRC passes or the
// groups run out. Already-fetched groups are reused; no group is ever
// queried twice.
RecoveryReport recover(PredictionOracle& oracle, const AttackMetadata& metadata,
                       const RecoverOptions& options = {});

// Non-adaptive baseline: queries every group up front and runs the full
// turbo decoder once.
RecoveryReport recover_all(PredictionOracle& oracle, const AttackMetadata& metadata,
                           const RecoverOptions& options = {});

// Direct-encoding baseline: reads every label of the uncoded dataset and
// returns the bits as-is. Cannot verify.
RecoveryReport recover_direct(PredictionOracle& oracle, const AttackMetadata& metadata);

}  // namespace iea
