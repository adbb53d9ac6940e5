#include "iea/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "iea/prng.hpp"
#include "json.hpp"

namespace iea {
namespace {

using nlohmann::json;

std::string source_name(MessageSpec::Source source) {
    switch (source) {
        case MessageSpec::Source::random_ints: return "random-ints";
        case MessageSpec::Source::hex: return "hex";
        case MessageSpec::Source::file: return "file";
        case MessageSpec::Source::property: return "property";
    }
    throw std::logic_error("bad message source");
}

MessageSpec::Source source_from_name(const std::string& name) {
    if (name == "random-ints") return MessageSpec::Source::random_ints;
    if (name == "hex") return MessageSpec::Source::hex;
    if (name == "file") return MessageSpec::Source::file;
    if (name == "property") return MessageSpec::Source::property;
    throw std::invalid_argument("unknown message source '" + name + "'");
}

json record_to_json(const PropertyRecord& r) {
    return json{{"age", r.average_age},
                {"female", r.female_pct},
                {"race", std::vector<double>(r.race_pct.begin(), r.race_pct.end())}};
}

PropertyRecord record_from_json(const json& j) {
    PropertyRecord r;
    r.average_age = j.at("age").get<int>();
    r.female_pct = j.at("female").get<double>();
    const auto race = j.at("race").get<std::vector<double>>();
    if (race.size() != r.race_pct.size()) {
        throw std::invalid_argument("property record needs exactly 5 race values");
    }
    std::copy(race.begin(), race.end(), r.race_pct.begin());
    return r;
}

double percentile(std::vector<std::uint64_t> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double rank = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return static_cast<double>(sorted[lo]) * (1.0 - frac) + static_cast<double>(sorted[hi]) * frac;
}

json recovery_to_json(const RecoveryReport& r) {
    return json::parse(r.to_json_string());
}

}  // namespace

Bitstream build_message(const MessageSpec& spec, std::uint64_t seed) {
    switch (spec.source) {
        case MessageSpec::Source::random_ints: {
            Xoshiro256StarStar rng(seed);
            std::vector<std::uint8_t> bytes(spec.random_count);
            for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.bounded(256));
            return bytes_to_bits(bytes);
        }
        case MessageSpec::Source::hex:
            return hex_to_bits(spec.hex);
        case MessageSpec::Source::file: {
            std::ifstream in(spec.path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open message file '" + spec.path + "'");
            std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                            std::istreambuf_iterator<char>());
            return bytes_to_bits(bytes);
        }
        case MessageSpec::Source::property:
            return encode_properties(spec.record);
    }
    throw std::logic_error("bad message source");
}

DerivedSeeds DerivedSeeds::from(std::uint64_t seed) {
    std::uint64_t sm = seed;
    DerivedSeeds s{};
    s.message = splitmix64_next(sm);
    s.master_ecc = splitmix64_next(sm);
    s.master_de = splitmix64_next(sm);
    s.benchmark = splitmix64_next(sm);
    s.init_baseline = splitmix64_next(sm);
    s.init_ecc = splitmix64_next(sm);
    s.init_de = splitmix64_next(sm);
    s.train_baseline = splitmix64_next(sm);
    s.train_ecc = splitmix64_next(sm);
    s.train_de = splitmix64_next(sm);
    s.fine_tune = splitmix64_next(sm);
    s.simulation = splitmix64_next(sm);
    return s;
}

std::string ExperimentConfig::to_json_string() const {
    json j;
    j["seed"] = seed;
    json m;
    m["source"] = source_name(message.source);
    switch (message.source) {
        case MessageSpec::Source::random_ints: m["count"] = message.random_count; break;
        case MessageSpec::Source::hex: m["hex"] = message.hex; break;
        case MessageSpec::Source::file: m["path"] = message.path; break;
        case MessageSpec::Source::property: m["record"] = record_to_json(message.record); break;
    }
    j["message"] = m;
    j["coding"] = {{"k", k},
                   {"classes", class_count},
                   {"bits_per_label_cap", bits_per_label_cap},
                   {"rsc_params", rsc_params_id},
                   {"feature_dim", feature_dim}};
    j["benchmark"] = {{"classes", benchmark.classes},
                      {"feature_dim", benchmark.feature_dim},
                      {"train_size", benchmark.train_size},
                      {"test_size", benchmark.test_size},
                      {"noise", benchmark.noise}};
    j["train"] = {{"epochs", train.epochs},
                  {"batch_size", train.batch_size},
                  {"attack_batch_size", train.attack_batch_size},
                  {"learning_rate", train.learning_rate},
                  {"decay_epochs", train.decay_epochs},
                  {"decay_factor", train.decay_factor}};
    std::vector<std::string> method_names;
    for (PostMethod m2 : methods) method_names.push_back(to_string(m2));
    j["postprocess"] = {{"budget", prune.accuracy_drop_budget},
                        {"step_fraction", prune.step_fraction},
                        {"ft_epochs", prune.fine_tune.epochs},
                        {"ft_learning_rate", prune.fine_tune.learning_rate},
                        {"methods", method_names}};
    json per_group = json::object();
    for (const auto& [g, p] : oracle.per_group_p) per_group[std::to_string(g)] = p;
    j["oracle"] = {{"mode", oracle.mode == OracleSpec::Mode::model ? "model" : "bsc"},
                   {"p", oracle.corruption_p},
                   {"per_group_p", per_group},
                   {"unused_label_weight", oracle.unused_label_weight},
                   {"channel_seed", oracle.channel_seed},
                   {"cost_per_query", oracle.cost_per_query}};
    j["assumed_crossover"] = assumed_crossover;
    j["trials"] = trials;
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    const json j = json::parse(text);
    ExperimentConfig c;
    c.seed = j.value("seed", c.seed);
    if (j.contains("message")) {
        const json& m = j.at("message");
        c.message.source = source_from_name(m.value("source", std::string("random-ints")));
        c.message.random_count = m.value("count", c.message.random_count);
        c.message.hex = m.value("hex", std::string());
        c.message.path = m.value("path", std::string());
        if (m.contains("record")) c.message.record = record_from_json(m.at("record"));
    }
    if (j.contains("coding")) {
        const json& coding = j.at("coding");
        c.k = coding.value("k", c.k);
        c.class_count = coding.value("classes", c.class_count);
        c.bits_per_label_cap = coding.value("bits_per_label_cap", c.bits_per_label_cap);
        c.rsc_params_id = coding.value("rsc_params", c.rsc_params_id);
        c.feature_dim = coding.value("feature_dim", c.feature_dim);
    }
    if (j.contains("benchmark")) {
        const json& b = j.at("benchmark");
        c.benchmark.classes = b.value("classes", c.benchmark.classes);
        c.benchmark.feature_dim = b.value("feature_dim", c.benchmark.feature_dim);
        c.benchmark.train_size = b.value("train_size", c.benchmark.train_size);
        c.benchmark.test_size = b.value("test_size", c.benchmark.test_size);
        c.benchmark.noise = b.value("noise", c.benchmark.noise);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        c.train.epochs = t.value("epochs", c.train.epochs);
        c.train.batch_size = t.value("batch_size", c.train.batch_size);
        c.train.attack_batch_size = t.value("attack_batch_size", c.train.attack_batch_size);
        c.train.learning_rate = t.value("learning_rate", c.train.learning_rate);
        c.train.decay_epochs = t.value("decay_epochs", c.train.decay_epochs);
        c.train.decay_factor = t.value("decay_factor", c.train.decay_factor);
    }
    if (j.contains("postprocess")) {
        const json& p = j.at("postprocess");
        c.prune.accuracy_drop_budget = p.value("budget", c.prune.accuracy_drop_budget);
        c.prune.step_fraction = p.value("step_fraction", c.prune.step_fraction);
        c.prune.fine_tune.epochs = p.value("ft_epochs", c.prune.fine_tune.epochs);
        c.prune.fine_tune.learning_rate =
            p.value("ft_learning_rate", c.prune.fine_tune.learning_rate);
        if (p.contains("methods")) {
            c.methods.clear();
            for (const auto& name : p.at("methods")) {
                c.methods.push_back(post_method_from_string(name.get<std::string>()));
            }
        }
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        const std::string mode = o.value("mode", std::string("bsc"));
        if (mode == "model") {
            c.oracle.mode = OracleSpec::Mode::model;
        } else if (mode == "bsc") {
            c.oracle.mode = OracleSpec::Mode::bsc;
        } else {
            throw std::invalid_argument("unknown oracle mode '" + mode + "'");
        }
        c.oracle.corruption_p = o.value("p", c.oracle.corruption_p);
        if (o.contains("per_group_p")) {
            for (const auto& [key, value] : o.at("per_group_p").items()) {
                c.oracle.per_group_p[std::stoi(key)] = value.get<double>();
            }
        }
        c.oracle.unused_label_weight = o.value("unused_label_weight", c.oracle.unused_label_weight);
        c.oracle.channel_seed = o.value("channel_seed", c.oracle.channel_seed);
        c.oracle.cost_per_query = o.value("cost_per_query", c.oracle.cost_per_query);
        c.oracle.model_file = o.value("model_file", std::string());
    }
    c.assumed_crossover = j.value("assumed_crossover", c.assumed_crossover);
    c.trials = j.value("trials", c.trials);
    return c;
}

AttackMetadata ExperimentConfig::make_metadata(AttackScheme scheme, std::uint64_t master_seed,
                                               std::size_t payload_bits) const {
    AttackMetadata m;
    m.scheme = scheme;
    m.master_seed = master_seed;
    m.feature_dim = feature_dim;
    m.class_count = class_count;
    m.payload_bits = payload_bits;
    m.rsc_params_id = rsc_params_id;
    m.k = scheme == AttackScheme::direct ? 0 : k;
    m.bits_per_label_cap = bits_per_label_cap;
    return m;
}

double ExperimentConfig::effective_crossover(double channel_p) const {
    if (assumed_crossover > 0.0) return assumed_crossover;
    const double p = channel_p > 0.0 ? channel_p : 0.05;
    return std::clamp(p, 1e-3, 0.45);
}

std::string SimulationSummary::to_json_string() const {
    json j;
    j["trials"] = trials;
    j["successes"] = successes;
    j["success_rate"] = success_rate;
    j["queries"] = {{"mean", mean_queries},
                    {"min", min_queries},
                    {"max", max_queries},
                    {"p50", p50_queries},
                    {"p90", p90_queries}};
    j["mean_failure_ber"] = mean_failure_ber;
    j["total_cost"] = total_cost;
    j["per_trial"] = json::array();
    for (const auto& o : outcomes) {
        j["per_trial"].push_back({{"verified", o.verified},
                                  {"exact", o.exact},
                                  {"queries", o.queries},
                                  {"groups", o.groups},
                                  {"failure_ber", o.failure_ber}});
    }
    return j.dump(2);
}

SimulationSummary simulate(const ExperimentConfig& config) {
    if (config.trials < 1) throw std::invalid_argument("simulate: trials must be >= 1");
    const DerivedSeeds seeds = DerivedSeeds::from(config.seed);
    std::uint64_t stream = seeds.simulation;

    SimulationSummary summary;
    summary.trials = config.trials;
    double ber_sum = 0.0;
    std::size_t failures = 0;
    std::vector<std::uint64_t> query_counts;

    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t message_seed = splitmix64_next(stream);
        const std::uint64_t master_seed = splitmix64_next(stream);
        const std::uint64_t channel_seed = splitmix64_next(stream);

        const Bitstream message = build_message(config.message, message_seed);
        const AttackMetadata metadata =
            config.make_metadata(AttackScheme::ecc, master_seed, message.size());
        const AttackDataset dataset = build_dataset_for_message(message, metadata);

        ChannelSpec channel;
        channel.corruption_p = config.oracle.corruption_p;
        channel.per_group_p = config.oracle.per_group_p;
        channel.unused_label_weight = config.oracle.unused_label_weight;
        channel.seed = channel_seed;
        BscOracle oracle(dataset.labels, dataset.group_index, config.class_count,
                         metadata.alphabet().usable_labels(), channel);
        oracle.set_cost_per_query(config.oracle.cost_per_query);

        RecoverOptions options;
        options.assumed_crossover = config.effective_crossover(config.oracle.corruption_p);
        const RecoveryReport report = recover(oracle, metadata, options);

        TrialOutcome outcome;
        outcome.verified = report.verified;
        outcome.exact = report.verified && report.message == message;
        outcome.queries = report.queries_used;
        outcome.groups = report.groups_consumed;
        if (!outcome.exact) {
            outcome.failure_ber = ber(message, report.message);
            ber_sum += outcome.failure_ber;
            ++failures;
        } else {
            ++summary.successes;
        }
        summary.total_cost += report.total_cost;
        query_counts.push_back(report.queries_used);
        summary.outcomes.push_back(outcome);
    }

    summary.success_rate =
        static_cast<double>(summary.successes) / static_cast<double>(summary.trials);
    std::sort(query_counts.begin(), query_counts.end());
    summary.min_queries = query_counts.front();
    summary.max_queries = query_counts.back();
    double total = 0.0;
    for (auto q : query_counts) total += static_cast<double>(q);
    summary.mean_queries = total / static_cast<double>(query_counts.size());
    summary.p50_queries = percentile(query_counts, 0.5);
    summary.p90_queries = percentile(query_counts, 0.9);
    summary.mean_failure_ber = failures > 0 ? ber_sum / static_cast<double>(failures) : 0.0;
    return summary;
}

bool PipelineReport::all_ecc_verified() const {
    for (const auto& m : methods) {
        if (!m.ecc.verified) return false;
    }
    return true;
}

std::string PipelineReport::to_json_string() const {
    json j;
    j["message_bits"] = message_bits;
    j["message_hex"] = message_hex;
    j["baseline_acc"] = baseline_acc;
    j["embedded_acc_ecc"] = embedded_acc_ecc;
    j["embedded_acc_de"] = embedded_acc_de;
    j["attack_acc_ecc"] = attack_acc_ecc;
    j["attack_acc_de"] = attack_acc_de;
    j["methods"] = json::array();
    for (const auto& m : methods) {
        json e;
        e["method"] = to_string(m.method);
        e["acc_de"] = m.acc_de;
        e["acc_ecc"] = m.acc_ecc;
        e["de"] = recovery_to_json(m.de);
        e["ecc"] = recovery_to_json(m.ecc);
        e["ecc_all"] = recovery_to_json(m.ecc_all);
        e["de_ber"] = m.de_ber;
        e["ecc_ber"] = m.ecc_ber;
        if (m.de_mse >= 0.0) e["de_mse"] = m.de_mse;
        if (m.ecc_mse >= 0.0) e["ecc_mse"] = m.ecc_mse;
        j["methods"].push_back(e);
    }
    return j.dump(2);
}

std::string PipelineReport::to_csv() const {
    std::ostringstream os;
    auto header = [&] {
        os << "Metric,Attack";
        for (const auto& m : methods) os << "," << to_string(m.method);
        os << "\n";
    };
    header();
    auto row = [&](const std::string& metric, const std::string& attack, auto getter) {
        os << metric << "," << attack;
        for (const auto& m : methods) os << "," << getter(m);
        os << "\n";
    };
    row("MSE", "DE", [](const MethodReport& m) { return m.de_mse; });
    row("MSE", "ECC", [](const MethodReport& m) { return m.ecc_mse; });
    row("BER(%)", "DE", [](const MethodReport& m) { return 100.0 * m.de_ber; });
    row("BER(%)", "ECC", [](const MethodReport& m) { return 100.0 * m.ecc_ber; });
    row("ACC(%)", "DE", [](const MethodReport& m) { return 100.0 * m.acc_de; });
    row("ACC(%)", "ECC", [](const MethodReport& m) { return 100.0 * m.acc_ecc; });
    row("#Queries", "DE", [](const MethodReport& m) { return m.de.queries_used; });
    row("#Queries", "ECC", [](const MethodReport& m) { return m.ecc.queries_used; });
    row("#Queries", "ECC-All", [](const MethodReport& m) { return m.ecc_all.queries_used; });
    return os.str();
}

PipelineReport run_pipeline(const ExperimentConfig& config) {
    if (config.class_count != config.benchmark.classes) {
        throw std::invalid_argument(
            "run_pipeline: coding classes must equal benchmark classes (the model is the channel)");
    }
    if (config.feature_dim != config.benchmark.feature_dim) {
        throw std::invalid_argument("run_pipeline: attack and benchmark feature dims differ");
    }
    const DerivedSeeds seeds = DerivedSeeds::from(config.seed);
    const Bitstream message = build_message(config.message, seeds.message);

    const AttackMetadata ecc_meta =
        config.make_metadata(AttackScheme::ecc, seeds.master_ecc, message.size());
    const AttackMetadata de_meta =
        config.make_metadata(AttackScheme::direct, seeds.master_de, message.size());
    const AttackDataset ecc_dataset = build_dataset_for_message(message, ecc_meta);
    const AttackDataset de_dataset = build_dataset_for_message(message, de_meta);

    const Benchmark bench = make_blob_benchmark(config.benchmark, seeds.benchmark);
    const std::vector<int> sizes = {config.benchmark.feature_dim, 50, 50,
                                    config.benchmark.classes};

    TrainConfig train_cfg = config.train;
    train_cfg.seed = seeds.train_baseline;
    TrainConfig baseline_cfg = train_cfg;
    baseline_cfg.attack_batch_size = 0;
    const MlpClassifier baseline = train_embed(MlpClassifier::init(sizes, seeds.init_baseline),
                                               bench.train, nullptr, baseline_cfg);
    train_cfg.seed = seeds.train_ecc;
    const MlpClassifier ecc_model = train_embed(MlpClassifier::init(sizes, seeds.init_ecc),
                                                bench.train, &ecc_dataset, train_cfg);
    train_cfg.seed = seeds.train_de;
    const MlpClassifier de_model = train_embed(MlpClassifier::init(sizes, seeds.init_de),
                                               bench.train, &de_dataset, train_cfg);

    PipelineReport report;
    report.message_bits = message.size();
    report.message_hex = bits_to_hex(message);
    report.baseline_acc = accuracy(baseline, bench.test);
    report.embedded_acc_ecc = accuracy(ecc_model, bench.test);
    report.embedded_acc_de = accuracy(de_model, bench.test);
    report.attack_acc_ecc = attack_accuracy(ecc_model, ecc_dataset);
    report.attack_acc_de = attack_accuracy(de_model, de_dataset);

    PruneConfig prune_cfg = config.prune;
    prune_cfg.fine_tune.seed = seeds.fine_tune;
    RecoverOptions options;
    options.assumed_crossover = config.effective_crossover(0.0);

    const bool byte_aligned = message.size() % 8 == 0;
    for (PostMethod method : config.methods) {
        MethodReport m;
        m.method = method;
        const MlpClassifier ecc_post =
            apply_postprocess(method, ecc_model, bench.train, bench.test, prune_cfg);
        const MlpClassifier de_post =
            apply_postprocess(method, de_model, bench.train, bench.test, prune_cfg);
        m.acc_ecc = accuracy(ecc_post, bench.test);
        m.acc_de = accuracy(de_post, bench.test);

        ModelOracle oracle_adaptive(ecc_post);
        oracle_adaptive.set_cost_per_query(config.oracle.cost_per_query);
        m.ecc = recover(oracle_adaptive, ecc_meta, options);
        ModelOracle oracle_all(ecc_post);
        oracle_all.set_cost_per_query(config.oracle.cost_per_query);
        m.ecc_all = recover_all(oracle_all, ecc_meta, options);
        ModelOracle oracle_direct(de_post);
        oracle_direct.set_cost_per_query(config.oracle.cost_per_query);
        m.de = recover_direct(oracle_direct, de_meta);

        m.ecc_ber = ber(message, m.ecc.message);
        m.de_ber = ber(message, m.de.message);
        if (byte_aligned) {
            m.ecc_mse = mse_int8(message, m.ecc.message);
            m.de_mse = mse_int8(message, m.de.message);
        }
        report.methods.push_back(std::move(m));
    }
    return report;
}

}  // namespace iea
