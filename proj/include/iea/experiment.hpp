#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iea/attackset.hpp"
#include "iea/benchmark.hpp"
#include "iea/metrics.hpp"
#include "iea/oracle.hpp"
#include "iea/postprocess.hpp"
#include "iea/property_codec.hpp"
#include "iea/recover.hpp"

namespace iea {

struct MessageSpec {
    enum class Source { random_ints, hex, file, property };
    Source source = Source::random_ints;
    std::size_t random_count = 500;  // random 8-bit integers
    std::string hex;
    std::string path;
    PropertyRecord record;
};

// Materializes the message bits; `seed` drives the random-integer preset.
Bitstream build_message(const MessageSpec& spec, std::uint64_t seed);

struct OracleSpec {
    enum class Mode { model, bsc };
    Mode mode = Mode::bsc;
    double corruption_p = 0.0;
    std::map<int, double> per_group_p;
    double unused_label_weight = 0.0;
    std::uint64_t channel_seed = 0;
    double cost_per_query = kDefaultCostPerQuery;
    std::string model_file;  // model mode, CLI use
};

// Fully determines a run; serializable. IEA_SEED overrides `seed` at load
// time in the CLI.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    MessageSpec message;

    // coding
    int k = 2;
    int class_count = 10;
    int bits_per_label_cap = 0;
    std::string rsc_params_id = kDefaultRscParams.id();
    int feature_dim = 20;

    BlobSpec benchmark;
    TrainConfig train;
    PruneConfig prune;
    std::vector<PostMethod> methods = all_post_methods();
    OracleSpec oracle;
    std::size_t trials = 100;
    double assumed_crossover = 0.0;  // 0 = derive from the channel (0.05 floor)

    std::string to_json_string() const;
    static ExperimentConfig from_json_string(const std::string& text);

    AttackMetadata make_metadata(AttackScheme scheme, std::uint64_t master_seed,
                                 std::size_t payload_bits) const;
    double effective_crossover(double channel_p) const;
};

// Named sub-seeds derived from the config seed (SplitMix64 sequence).
struct DerivedSeeds {
    std::uint64_t message;
    std::uint64_t master_ecc;
    std::uint64_t master_de;
    std::uint64_t benchmark;
    std::uint64_t init_baseline;
    std::uint64_t init_ecc;
    std::uint64_t init_de;
    std::uint64_t train_baseline;
    std::uint64_t train_ecc;
    std::uint64_t train_de;
    std::uint64_t fine_tune;
    std::uint64_t simulation;

    static DerivedSeeds from(std::uint64_t seed);
};

struct TrialOutcome {
    bool verified = false;
    bool exact = false;
    std::uint64_t queries = 0;
    int groups = 0;
    double failure_ber = 0.0;  // BER against truth, failures only
};

struct SimulationSummary {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double mean_queries = 0.0;
    std::uint64_t min_queries = 0;
    std::uint64_t max_queries = 0;
    double p50_queries = 0.0;
    double p90_queries = 0.0;
    double mean_failure_ber = 0.0;
    double total_cost = 0.0;
    std::vector<TrialOutcome> outcomes;

    std::string to_json_string() const;
};

// Monte Carlo: encode -> label channel -> adaptive recover, per-trial
// seeds drawn from one SplitMix64 stream so a longer run reproduces the
// shorter run's prefix.
SimulationSummary simulate(const ExperimentConfig& config);

struct MethodReport {
    PostMethod method = PostMethod::none;
    double acc_de = 0.0;
    double acc_ecc = 0.0;
    RecoveryReport de;
    RecoveryReport ecc;
    RecoveryReport ecc_all;
    double de_ber = 0.0;
    double de_mse = -1.0;  // -1 when the message is not byte-aligned
    double ecc_ber = 0.0;
    double ecc_mse = -1.0;
};

struct PipelineReport {
    std::size_t message_bits = 0;
    std::string message_hex;
    double baseline_acc = 0.0;
    double embedded_acc_ecc = 0.0;  // before post-processing
    double embedded_acc_de = 0.0;
    double attack_acc_ecc = 0.0;    // fraction of attack points memorized
    double attack_acc_de = 0.0;
    std::vector<MethodReport> methods;

    bool all_ecc_verified() const;
    std::string to_json_string() const;
    std::string to_csv() const;  // Table-1 shaped layout
};

// End to end: train baseline + embedded models, post-process with each
// requested method, recover through the model oracles, tabulate
// MSE/BER/ACC/#Queries.
PipelineReport run_pipeline(const ExperimentConfig& config);

}  // namespace iea
