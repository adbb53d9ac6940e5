// Command-line front end for the information-embedding toolkit: encode
// messages into label datasets, train/post-process the desk-scale
// classifier, and run the adaptive recovery and experiment drivers.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "iea/experiment.hpp"

namespace {

using namespace iea;
using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig config =
        path.empty() ? ExperimentConfig{} : ExperimentConfig::from_json_string(read_file(path));
    if (const char* env = std::getenv("IEA_SEED")) {
        config.seed = std::stoull(env);
    }
    return config;
}

struct LabelArtifact {
    AttackMetadata metadata;
    std::vector<int> labels;
    std::string message_hex;
};

std::string artifact_to_json(const LabelArtifact& artifact) {
    json j;
    j["metadata"] = json::parse(artifact.metadata.to_json_string());
    j["labels"] = artifact.labels;
    j["message_hex"] = artifact.message_hex;
    return j.dump(2);
}

LabelArtifact artifact_from_json(const std::string& text) {
    const json j = json::parse(text);
    LabelArtifact artifact;
    artifact.metadata = AttackMetadata::from_json_string(j.at("metadata").dump());
    artifact.labels = j.at("labels").get<std::vector<int>>();
    artifact.message_hex = j.value("message_hex", std::string());
    return artifact;
}

std::vector<int> group_index_for(const AttackMetadata& metadata) {
    std::vector<int> groups;
    if (metadata.scheme == AttackScheme::direct) {
        groups.assign(metadata.direct_label_count(), 1);
        return groups;
    }
    const GroupLayout layout = metadata.layout();
    for (int g = 0; g < layout.group_count(); ++g) {
        groups.insert(groups.end(), layout.group_labels(g), g + 1);
    }
    return groups;
}

ChannelSpec channel_from(const OracleSpec& spec) {
    ChannelSpec channel;
    channel.corruption_p = spec.corruption_p;
    channel.per_group_p = spec.per_group_p;
    channel.unused_label_weight = spec.unused_label_weight;
    channel.seed = spec.channel_seed;
    return channel;
}

void add_message_flags(CLI::App* cmd, MessageSpec& message, std::vector<double>& race) {
    auto* hex = cmd->add_option_function<std::string>(
        "--message-hex",
        [&message](const std::string& value) {
            message.source = MessageSpec::Source::hex;
            message.hex = value;
        },
        "message as a hex byte string");
    auto* file = cmd->add_option_function<std::string>(
        "--message-file",
        [&message](const std::string& value) {
            message.source = MessageSpec::Source::file;
            message.path = value;
        },
        "message from a binary file");
    auto* ints = cmd->add_option_function<std::size_t>(
        "--random-ints",
        [&message](std::size_t value) {
            message.source = MessageSpec::Source::random_ints;
            message.random_count = value;
        },
        "message of N seeded random 8-bit integers");
    auto* age = cmd->add_option_function<int>(
        "--age",
        [&message](int value) {
            message.source = MessageSpec::Source::property;
            message.record.average_age = value;
        },
        "property message: average age (2 digits)");
    cmd->add_option_function<double>(
        "--female", [&message](double value) { message.record.female_pct = value; },
        "property message: female percentage dd.dd");
    cmd->add_option("--race", race, "property message: five race percentages dd.dd")
        ->expected(5);
    hex->excludes(file)->excludes(ints)->excludes(age);
    file->excludes(ints)->excludes(age);
    ints->excludes(age);
}

void finish_property_record(MessageSpec& message, const std::vector<double>& race) {
    if (message.source == MessageSpec::Source::property && race.size() == 5) {
        std::copy(race.begin(), race.end(), message.record.race_pct.begin());
    }
}

int cmd_encode(const MessageSpec& message_spec, const std::vector<double>& race,
               const ExperimentConfig& base, const std::string& scheme_name,
               std::uint64_t master_seed, const std::string& out_path) {
    MessageSpec spec = message_spec;
    finish_property_record(spec, race);
    const Bitstream message = build_message(spec, DerivedSeeds::from(base.seed).message);
    const AttackScheme scheme = attack_scheme_from_string(scheme_name);
    const AttackMetadata metadata = base.make_metadata(scheme, master_seed, message.size());
    const AttackDataset dataset = build_dataset_for_message(message, metadata);

    LabelArtifact artifact{metadata, dataset.labels, bits_to_hex(message)};
    const std::string text = artifact_to_json(artifact);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        write_file(out_path, text);
    }
    std::cerr << "message bits: " << message.size() << "\n";
    if (scheme == AttackScheme::ecc) {
        const GroupLayout layout = metadata.layout();
        std::cerr << "groups:";
        for (int g = 0; g < layout.group_count(); ++g) std::cerr << " " << layout.group_labels(g);
        std::cerr << " (total " << layout.total_labels() << " labels)\n";
    } else {
        std::cerr << "labels: " << dataset.labels.size() << "\n";
    }
    return 0;
}

int run_recovery(PredictionOracle& oracle, const AttackMetadata& metadata, const std::string& mode,
                 const RecoverOptions& options, const std::string& report_path,
                 const std::string& truth_hex) {
    RecoveryReport report;
    if (mode == "adaptive") {
        report = recover(oracle, metadata, options);
    } else if (mode == "all") {
        report = recover_all(oracle, metadata, options);
    } else if (mode == "direct") {
        report = recover_direct(oracle, metadata);
    } else {
        throw std::runtime_error("unknown recovery mode '" + mode + "'");
    }
    const std::string text = report.to_json_string();
    if (report_path.empty()) {
        std::cout << text << "\n";
    } else {
        write_file(report_path, text);
        std::cout << (report.verified ? "verified" : "unverified") << ", queries "
                  << report.queries_used << "\n";
    }
    if (!truth_hex.empty()) {
        const Bitstream truth = hex_to_bits(truth_hex).slice(0, report.message.size());
        std::cerr << "ber vs truth: " << ber(truth, report.message) << "\n";
    }
    if (!report.error.empty()) return 2;
    if (mode == "direct") return 0;  // the DE baseline cannot verify
    return report.verified ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information embedding over a query-metered label channel"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string report_path;
    std::string model_in;
    std::string model_out;
    std::string metadata_path;
    std::string labels_path;
    std::string method_name = "none";
    std::string oracle_kind = "model";
    std::string model_file;
    std::string mode = "adaptive";
    std::string format = "json";
    std::string csv_out;
    std::string scheme_name = "ecc";
    std::uint64_t master_seed = 1;
    double p_hat = 0.0;
    int max_iterations = 10;
    double channel_p = 0.0;
    std::uint64_t channel_seed = 0;
    std::vector<std::string> group_p_args;
    std::optional<std::size_t> trials_override;
    MessageSpec message_spec;
    std::vector<double> race;

    auto* encode = app.add_subcommand("encode", "frame + turbo-encode a message into labels");
    add_message_flags(encode, message_spec, race);
    encode->add_option("--config", config_path, "experiment config JSON");
    encode->add_option("--scheme", scheme_name, "ecc or direct")
        ->check(CLI::IsMember({"ecc", "direct"}));
    encode->add_option("--master-seed", master_seed, "attack dataset master seed");
    encode->add_option("--out", out_path, "labels artifact path (stdout if omitted)");

    auto* decode = app.add_subcommand("decode", "adaptive decode of a labels artifact");
    decode->add_option("--in", labels_path, "labels artifact")->required();
    decode->add_option("--p-hat", p_hat, "assumed crossover probability");
    decode->add_option("--max-iterations", max_iterations, "turbo iterations");
    decode->add_option("--report", report_path, "recovery report path");
    decode->add_option("--mode", mode, "adaptive | all | direct")
        ->check(CLI::IsMember({"adaptive", "all", "direct"}));

    auto* embed = app.add_subcommand("embed", "train the classifier with the attack dataset");
    add_message_flags(embed, message_spec, race);
    embed->add_option("--config", config_path, "experiment config JSON");
    embed->add_option("--scheme", scheme_name, "ecc or direct")
        ->check(CLI::IsMember({"ecc", "direct"}));
    embed->add_option("--model-out", model_out, "trained model path")->required();
    embed->add_option("--metadata-out", metadata_path, "attack metadata path")->required();
    embed->add_option("--labels-out", labels_path, "labels artifact path");

    auto* post = app.add_subcommand("postprocess", "apply a post-processing method to a model");
    post->add_option("--config", config_path, "experiment config JSON");
    post->add_option("--method", method_name, "none|ftll|ftal|prwt|prwt-ft|prfl|prfl-ft|adpr|adpr-ft")
        ->required();
    post->add_option("--model-in", model_in, "input model")->required();
    post->add_option("--model-out", model_out, "output model")->required();

    auto* rec = app.add_subcommand("recover", "recover the message through an oracle");
    rec->add_option("--metadata", metadata_path, "attack metadata JSON")->required();
    rec->add_option("--oracle", oracle_kind, "model | bsc")->check(CLI::IsMember({"model", "bsc"}));
    rec->add_option("--model-file", model_file, "model for the model oracle");
    rec->add_option("--labels", labels_path, "labels artifact providing bsc ground truth");
    rec->add_option("--p", channel_p, "bsc corruption probability");
    rec->add_option("--p-group", group_p_args, "per-group corruption, e.g. 1=0.1 (repeatable)");
    rec->add_option("--channel-seed", channel_seed, "bsc stream seed");
    rec->add_option("--p-hat", p_hat, "assumed crossover probability");
    rec->add_option("--max-iterations", max_iterations, "turbo iterations");
    rec->add_option("--mode", mode, "adaptive | all | direct")
        ->check(CLI::IsMember({"adaptive", "all", "direct"}));
    rec->add_option("--report", report_path, "recovery report path");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo channel experiment");
    sim->add_option("--config", config_path, "experiment config JSON");
    sim->add_option_function<std::size_t>(
        "--trials", [&trials_override](std::size_t v) { trials_override = v; }, "trial count");
    sim->add_option("--report", report_path, "summary path");

    auto* pipe = app.add_subcommand("pipeline", "embed -> postprocess -> recover, full table");
    pipe->add_option("--config", config_path, "experiment config JSON");
    pipe->add_option("--report", report_path, "report path");
    pipe->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    pipe->add_option("--csv-out", csv_out, "also write the csv table here");

    auto* demo = app.add_subcommand("demo-property", "property-inference demo over a bsc channel");
    demo->add_option("--age", message_spec.record.average_age, "average age");
    demo->add_option("--female", message_spec.record.female_pct, "female percentage");
    demo->add_option("--race", race, "five race percentages")->expected(5);
    demo->add_option("--config", config_path, "experiment config JSON");
    demo->add_option("--p", channel_p, "bsc corruption probability");
    demo->add_option("--channel-seed", channel_seed, "bsc stream seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode->parsed()) {
            ExperimentConfig config = load_config(config_path);
            return cmd_encode(message_spec, race, config, scheme_name, master_seed, out_path);
        }

        if (decode->parsed()) {
            const LabelArtifact artifact = artifact_from_json(read_file(labels_path));
            ChannelSpec clean;  // p = 0: the artifact's labels pass through unchanged
            BscOracle oracle(artifact.labels, group_index_for(artifact.metadata),
                             artifact.metadata.class_count,
                             artifact.metadata.alphabet().usable_labels(), clean);
            RecoverOptions options;
            options.assumed_crossover = p_hat > 0.0 ? p_hat : 0.05;
            options.max_iterations = max_iterations;
            const std::string wanted =
                artifact.metadata.scheme == AttackScheme::direct ? "direct" : mode;
            return run_recovery(oracle, artifact.metadata, wanted, options, report_path,
                                artifact.message_hex);
        }

        if (embed->parsed()) {
            ExperimentConfig config = load_config(config_path);
            finish_property_record(message_spec, race);
            const bool message_on_cli = embed->count("--message-hex") ||
                                        embed->count("--message-file") ||
                                        embed->count("--random-ints") || embed->count("--age");
            if (message_on_cli) config.message = message_spec;
            const DerivedSeeds seeds = DerivedSeeds::from(config.seed);
            const Bitstream message = build_message(config.message, seeds.message);
            const AttackScheme scheme = attack_scheme_from_string(scheme_name);
            const AttackMetadata metadata = config.make_metadata(
                scheme, scheme == AttackScheme::ecc ? seeds.master_ecc : seeds.master_de,
                message.size());
            const AttackDataset dataset = build_dataset_for_message(message, metadata);
            const Benchmark bench = make_blob_benchmark(config.benchmark, seeds.benchmark);

            TrainConfig train_cfg = config.train;
            train_cfg.seed = scheme == AttackScheme::ecc ? seeds.train_ecc : seeds.train_de;
            const std::vector<int> sizes = {config.benchmark.feature_dim, 50, 50,
                                            config.benchmark.classes};
            const MlpClassifier model = train_embed(
                MlpClassifier::init(sizes, scheme == AttackScheme::ecc ? seeds.init_ecc
                                                                       : seeds.init_de),
                bench.train, &dataset, train_cfg);
            save_model(model, model_out);
            write_file(metadata_path, metadata.to_json_string());
            if (!labels_path.empty()) {
                write_file(labels_path,
                           artifact_to_json({metadata, dataset.labels, bits_to_hex(message)}));
            }
            Dataset test = bench.test;
            std::cout << "test accuracy: " << accuracy(model, test)
                      << ", attack-set accuracy: " << attack_accuracy(model, dataset) << "\n";
            return 0;
        }

        if (post->parsed()) {
            ExperimentConfig config = load_config(config_path);
            const DerivedSeeds seeds = DerivedSeeds::from(config.seed);
            const Benchmark bench = make_blob_benchmark(config.benchmark, seeds.benchmark);
            PruneConfig prune_cfg = config.prune;
            prune_cfg.fine_tune.seed = seeds.fine_tune;
            const MlpClassifier model = load_model(model_in);
            const MlpClassifier processed = apply_postprocess(
                post_method_from_string(method_name), model, bench.train, bench.test, prune_cfg);
            save_model(processed, model_out);
            std::cout << "test accuracy: " << accuracy(processed, bench.test) << "\n";
            return 0;
        }

        if (rec->parsed()) {
            const AttackMetadata metadata = AttackMetadata::from_json_string(read_file(metadata_path));
            RecoverOptions options;
            options.max_iterations = max_iterations;
            options.assumed_crossover =
                p_hat > 0.0 ? p_hat : (channel_p > 0.0 ? std::min(channel_p, 0.45) : 0.05);
            const std::string wanted =
                metadata.scheme == AttackScheme::direct ? "direct" : mode;
            if (oracle_kind == "model") {
                if (model_file.empty()) throw std::runtime_error("--model-file required");
                ModelOracle oracle(load_model(model_file));
                return run_recovery(oracle, metadata, wanted, options, report_path, "");
            }
            if (labels_path.empty()) {
                throw std::runtime_error("--labels required for the bsc oracle");
            }
            const LabelArtifact artifact = artifact_from_json(read_file(labels_path));
            ChannelSpec channel;
            channel.corruption_p = channel_p;
            channel.seed = channel_seed;
            for (const auto& arg : group_p_args) {
                const auto eq = arg.find('=');
                if (eq == std::string::npos) throw std::runtime_error("--p-group wants g=p");
                channel.per_group_p[std::stoi(arg.substr(0, eq))] = std::stod(arg.substr(eq + 1));
            }
            BscOracle oracle(artifact.labels, group_index_for(metadata), metadata.class_count,
                             metadata.alphabet().usable_labels(), channel);
            return run_recovery(oracle, metadata, wanted, options, report_path,
                                artifact.message_hex);
        }

        if (sim->parsed()) {
            ExperimentConfig config = load_config(config_path);
            if (trials_override) config.trials = *trials_override;
            const SimulationSummary summary = simulate(config);
            const std::string text = summary.to_json_string();
            if (report_path.empty()) {
                std::cout << text << "\n";
            } else {
                write_file(report_path, text);
                std::cout << "success rate " << summary.success_rate << ", mean queries "
                          << summary.mean_queries << "\n";
            }
            return summary.successes == summary.trials ? 0 : 1;
        }

        if (pipe->parsed()) {
            ExperimentConfig config = load_config(config_path);
            const PipelineReport report = run_pipeline(config);
            const std::string text = format == "csv" ? report.to_csv() : report.to_json_string();
            if (report_path.empty()) {
                std::cout << text << "\n";
            } else {
                write_file(report_path, text);
            }
            if (!csv_out.empty()) write_file(csv_out, report.to_csv());
            return report.all_ecc_verified() ? 0 : 1;
        }

        if (demo->parsed()) {
            ExperimentConfig config = load_config(config_path);
            config.message.source = MessageSpec::Source::property;
            config.message.record.average_age = message_spec.record.average_age;
            config.message.record.female_pct = message_spec.record.female_pct;
            if (race.size() == 5) {
                std::copy(race.begin(), race.end(), config.message.record.race_pct.begin());
            }
            const DerivedSeeds seeds = DerivedSeeds::from(config.seed);
            const Bitstream message = build_message(config.message, seeds.message);
            const AttackMetadata metadata =
                config.make_metadata(AttackScheme::ecc, seeds.master_ecc, message.size());
            const AttackDataset dataset = build_dataset_for_message(message, metadata);
            ChannelSpec channel;
            channel.corruption_p = channel_p;
            channel.seed = channel_seed;
            BscOracle oracle(dataset.labels, dataset.group_index, metadata.class_count,
                             metadata.alphabet().usable_labels(), channel);
            RecoverOptions options;
            options.assumed_crossover = channel_p > 0.0 ? std::min(channel_p, 0.45) : 0.05;
            const RecoveryReport report = recover(oracle, metadata, options);

            const DecodedProperties truth = decode_properties(message);
            std::cout << "embedded : age " << truth.average_age.text << ", female "
                      << truth.female_pct.text << ", race";
            for (const auto& f : truth.race_pct) std::cout << " " << f.text;
            std::cout << "\n";
            if (report.message.size() == kPropertyMessageBits) {
                const DecodedProperties got = decode_properties(report.message);
                std::cout << "recovered: age " << got.average_age.text << ", female "
                          << got.female_pct.text << ", race";
                for (const auto& f : got.race_pct) std::cout << " " << f.text;
                std::cout << "\n";
            }
            std::cout << (report.verified ? "verified" : "unverified") << ", queries "
                      << report.queries_used << ", cost " << report.total_cost << "\n";
            return report.verified ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
