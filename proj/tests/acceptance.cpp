// Acceptance suite: every criterion prints one PASS/FAIL line; the
// process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <vector>

#include "iea/experiment.hpp"
#include "iea/prng.hpp"

using namespace iea;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Bitstream random_bits(std::size_t n, Xoshiro256StarStar& rng) {
    Bitstream out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(rng.next() & 1));
    return out;
}

Bitstream flipped(const Bitstream& bits, double p, Xoshiro256StarStar& rng) {
    Bitstream out = bits;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (rng.uniform01() < p) out.flip(i);
    }
    return out;
}

AttackMetadata metadata_for(std::size_t payload_bits, int classes, int k, std::uint64_t seed,
                            int feature_dim = 8) {
    AttackMetadata m;
    m.master_seed = seed;
    m.feature_dim = feature_dim;
    m.class_count = classes;
    m.payload_bits = payload_bits;
    m.k = k;
    return m;
}

BscOracle make_bsc(const AttackDataset& ds, const AttackMetadata& metadata, ChannelSpec spec) {
    return BscOracle(ds.labels, ds.group_index, metadata.class_count,
                     metadata.alphabet().usable_labels(), spec);
}

// ---- criterion 1: coding roundtrip --------------------------------------

void criterion1() {
    const auto start = std::chrono::steady_clock::now();
    Xoshiro256StarStar rng(101);
    const LabelAlphabet alphabet{10, 0};
    const Trellis trellis(kDefaultRscParams);
    int exact = 0;
    const int trials = 500;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t bits = 64 + rng.bounded(8192 - 64 + 1);
        const Bitstream message = random_bits(bits, rng);
        const ChecksummedMessage mc = frame(message);
        const std::uint64_t interleaver_seed = rng.next();
        const TurboCodeword cw = turbo_encode(mc, kDefaultRscParams, interleaver_seed);
        const LabelGroups groups = partition_groups(cw, alphabet);

        // labels -> bits -> LLRs -> full turbo decode (i = k, no noise)
        auto group_llr = [&](int g, std::size_t offset, std::size_t length) {
            const LabelDecodeResult decoded = labels_to_bits(
                groups.labels[static_cast<std::size_t>(g)], alphabet, groups.layout.group_bits(g));
            LlrSequence out;
            const Bitstream sliced = decoded.bits.slice(offset, length);
            const std::vector<std::uint8_t> erasures(
                decoded.erasures.begin() + static_cast<std::ptrdiff_t>(offset),
                decoded.erasures.begin() + static_cast<std::ptrdiff_t>(offset + length));
            return hard_to_llr(sliced, erasures, 0.05);
        };
        const std::size_t n = mc.framed.size();
        TurboChannelLlrs received;
        received.systematic = group_llr(0, 0, n);
        received.parity_a.push_back(group_llr(1, 0, n));
        received.tail_systematic = group_llr(1, n, 3);
        received.tail_parity_a.push_back(group_llr(1, n + 3, 3));
        received.parity_b.push_back(group_llr(2, 0, n));
        received.parity_a.push_back(group_llr(3, 0, n));
        received.tail_parity_a.push_back(group_llr(3, n, 3));
        received.parity_b.push_back(group_llr(4, 0, n));

        const Interleaver pi = make_interleaver(n, interleaver_seed);
        const TurboDecodeResult res = turbo_decode(received, trellis, pi, DecodeConfig{});
        const VerifyResult check = verify(res.hard_bits);
        if (res.converged && check.ok && check.payload == message) ++exact;
    }
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d/%d exact, %.1fs", exact, trials, elapsed);
    report(1, "coding roundtrip 64..8192 bits", exact == trials && elapsed < 30.0, detail);
}

// ---- criterion 2: CRC detection ------------------------------------------

void criterion2() {
    const auto start = std::chrono::steady_clock::now();
    Xoshiro256StarStar rng(202);
    const Bitstream framed = frame(random_bits(4000, rng)).framed;

    int missed = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        Bitstream corrupted = framed;
        const std::size_t flips = 1 + rng.bounded(32);
        std::set<std::size_t> positions;
        while (positions.size() < flips) positions.insert(rng.bounded(corrupted.size()));
        for (std::size_t pos : positions) corrupted.flip(pos);
        if (verify(corrupted).ok) ++missed;
    }

    int sweep_missed = 0;
    for (std::size_t i = 0; i < framed.size(); ++i) {
        Bitstream corrupted = framed;
        corrupted.flip(i);
        if (verify(corrupted).ok) ++sweep_missed;
    }
    const double elapsed = seconds_since(start);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "0 expected misses: %d random, %d single-bit, %.1fs",
                  missed, sweep_missed, elapsed);
    report(2, "CRC detects 1..32-bit corruption", missed == 0 && sweep_missed == 0 && elapsed < 30.0,
           detail);
}

// ---- criterion 3: error-correction power ---------------------------------

void criterion3() {
    const auto start = std::chrono::steady_clock::now();
    Xoshiro256StarStar rng(303);
    const Trellis trellis(kDefaultRscParams);
    int exact = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const Bitstream message = random_bits(4000, rng);
        const ChecksummedMessage mc = frame(message);
        const std::uint64_t seed = rng.next();
        const TurboCodeword cw = turbo_encode(mc, kDefaultRscParams, seed);

        const std::vector<std::uint8_t> none;
        TurboChannelLlrs received;
        received.systematic = hard_to_llr(flipped(cw.systematic, 0.08, rng), none, 0.08);
        for (int s = 0; s < 2; ++s) {
            received.parity_a.push_back(hard_to_llr(flipped(cw.parity_a[s], 0.08, rng), none, 0.08));
            received.tail_parity_a.push_back(
                hard_to_llr(flipped(cw.tail_a.parity[s], 0.08, rng), none, 0.08));
            received.parity_b.push_back(hard_to_llr(flipped(cw.parity_b[s], 0.08, rng), none, 0.08));
        }
        received.tail_systematic = hard_to_llr(flipped(cw.tail_a.systematic, 0.08, rng), none, 0.08);

        const Interleaver pi = make_interleaver(mc.framed.size(), seed);
        const TurboDecodeResult res = turbo_decode(received, trellis, pi, DecodeConfig{});
        const VerifyResult check = verify(res.hard_bits);
        if (res.converged && check.ok && check.payload == message) ++exact;
    }
    const double elapsed = seconds_since(start);
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%d/%d exact at 8%% bit corruption, %.1fs", exact, trials,
                  elapsed);
    report(3, "turbo corrects 8% corruption (k=2)", exact >= 99 && elapsed < 60.0, detail);
}

// ---- criterion 4: query-count reproduction --------------------------------

void criterion4() {
    Xoshiro256StarStar rng(404);
    bool pass = true;
    std::string detail;

    {  // Table 1 configuration: 4,000-bit message, c = 10, k = 2
        const AttackMetadata ecc = metadata_for(4000, 10, 2, 4242);
        const Bitstream message = random_bits(4000, rng);
        const AttackDataset ds = build_dataset_for_message(message, ecc);

        BscOracle clean = make_bsc(ds, ecc, {});
        const RecoveryReport adaptive = recover(clean, ecc);
        pass = pass && adaptive.verified && adaptive.queries_used == 1344;
        detail += "recover=" + std::to_string(adaptive.queries_used);

        BscOracle clean_all = make_bsc(ds, ecc, {});
        const RecoveryReport all = recover_all(clean_all, ecc);
        pass = pass && all.queries_used >= 6720 && all.queries_used <= 6740;
        detail += " all=" + std::to_string(all.queries_used);

        AttackMetadata de = ecc;
        de.scheme = AttackScheme::direct;
        de.k = 0;
        const AttackDataset de_ds = build_dataset_for_message(message, de);
        BscOracle de_oracle = make_bsc(de_ds, de, {});
        const RecoveryReport direct = recover_direct(de_oracle, de);
        pass = pass && direct.queries_used == 1334 && direct.message == message;
        detail += " direct=" + std::to_string(direct.queries_used);
    }
    {  // Table 3 configuration: 256-bit property message, c = 2
        const AttackMetadata ecc = metadata_for(256, 2, 2, 2323);
        PropertyRecord record;
        record.average_age = 39;
        record.female_pct = 32.43;
        record.race_pct = {85.98, 2.97, 0.95, 9.34, 0.77};
        const Bitstream message = encode_properties(record);
        const AttackDataset ds = build_dataset_for_message(message, ecc);
        BscOracle clean = make_bsc(ds, ecc, {});
        const RecoveryReport adaptive = recover(clean, ecc);
        pass = pass && adaptive.verified && adaptive.queries_used == 288;
        detail += " property=" + std::to_string(adaptive.queries_used);

        AttackMetadata de = ecc;
        de.scheme = AttackScheme::direct;
        de.k = 0;
        const AttackDataset de_ds = build_dataset_for_message(message, de);
        BscOracle de_oracle = make_bsc(de_ds, de, {});
        const RecoveryReport direct = recover_direct(de_oracle, de);
        pass = pass && direct.queries_used == 256;
        detail += " property-direct=" + std::to_string(direct.queries_used);
    }
    report(4, "query counts: 1344/1334/288/256, all in [6720,6740]", pass, detail);
}

// ---- criterion 5: adaptive staging ----------------------------------------

void criterion5() {
    const auto start = std::chrono::steady_clock::now();
    Xoshiro256StarStar rng(505);
    bool pass = true;
    std::string detail;

    const AttackMetadata metadata = metadata_for(4000, 10, 2, 5151);
    const Bitstream message = random_bits(4000, rng);
    const AttackDataset ds = build_dataset_for_message(message, metadata);

    {  // group 1 lightly corrupted: raw fails, D2 repairs it
        ChannelSpec spec;
        spec.per_group_p[1] = 0.004;
        spec.seed = 9;
        BscOracle oracle = make_bsc(ds, metadata, spec);
        RecoverOptions options;
        options.assumed_crossover = 0.01;
        const RecoveryReport r = recover(oracle, metadata, options);
        pass = pass && r.verified && r.groups_consumed == 2 && r.message == message;
        detail += "D2-groups=" + std::to_string(r.groups_consumed);
    }
    {  // groups 1-2 corrupted harder: D2 fails, T3 repairs it
        ChannelSpec spec;
        spec.per_group_p[1] = 0.06;
        spec.per_group_p[2] = 0.06;
        spec.seed = 11;
        BscOracle oracle = make_bsc(ds, metadata, spec);
        RecoverOptions options;
        options.assumed_crossover = 0.05;
        const RecoveryReport r = recover(oracle, metadata, options);
        pass = pass && r.verified && r.groups_consumed == 3 && r.message == message;
        detail += " T3-groups=" + std::to_string(r.groups_consumed);
    }
    {  // adaptive dominance over 1,000 random channel settings
        const AttackMetadata small = metadata_for(240, 10, 2, 5252);
        const Bitstream small_message = random_bits(240, rng);
        const AttackDataset small_ds = build_dataset_for_message(small_message, small);
        int dominated = 0;
        const int settings = 1000;
        for (int trial = 0; trial < settings; ++trial) {
            ChannelSpec spec;
            spec.seed = rng.next();
            for (int g = 1; g <= 5; ++g) {
                if (rng.bounded(2)) spec.per_group_p[g] = 0.3 * rng.uniform01();
            }
            RecoverOptions options;
            options.assumed_crossover = 0.05;
            BscOracle adaptive_oracle = make_bsc(small_ds, small, spec);
            const RecoveryReport adaptive = recover(adaptive_oracle, small, options);
            BscOracle all_oracle = make_bsc(small_ds, small, spec);
            const RecoveryReport all = recover_all(all_oracle, small, options);
            if (adaptive.queries_used <= all.queries_used) ++dominated;
        }
        pass = pass && dominated == settings;
        detail += " dominance=" + std::to_string(dominated) + "/1000";
    }
    char timing[32];
    std::snprintf(timing, sizeof(timing), " %.1fs", seconds_since(start));
    report(5, "Algorithm-1 stage ladder and adaptive dominance", pass, detail + timing);
}

// ---- criteria 6 and 7: end-to-end embedding -------------------------------

ExperimentConfig embed_config(std::uint64_t seed) {
    ExperimentConfig config;
    config.seed = seed;
    config.message.source = MessageSpec::Source::random_ints;
    config.message.random_count = 32;  // 256-bit message
    config.class_count = 8;
    config.k = 2;
    config.feature_dim = 20;
    config.benchmark.classes = 8;
    config.benchmark.feature_dim = 20;
    config.benchmark.train_size = 8000;
    config.benchmark.test_size = 2000;
    config.benchmark.noise = 0.15;
    return config;
}

void criterion6() {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig config = embed_config(606);
    config.methods = {PostMethod::none};
    const PipelineReport report6 = run_pipeline(config);
    const double elapsed = seconds_since(start);
    const MethodReport& none = report6.methods.at(0);
    const bool pass = none.ecc.verified && none.ecc.groups_consumed == 1 &&
                      report6.baseline_acc - report6.embedded_acc_ecc <= 0.02 && elapsed < 120.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "groups=%d verified=%d baseline=%.4f embedded=%.4f attack-acc=%.4f %.1fs",
                  none.ecc.groups_consumed, none.ecc.verified ? 1 : 0, report6.baseline_acc,
                  report6.embedded_acc_ecc, report6.attack_acc_ecc, elapsed);
    report(6, "end-to-end embed/recover, one group, <=2pt accuracy cost", pass, detail);
}

void criterion7() {
    const auto start = std::chrono::steady_clock::now();
    const int runs = 10;
    int robust_runs = 0;      // all 8 methods ECC-verified
    int separation_runs = 0;  // ... and DE shows BER > 0 under some pruning method
    for (int run = 0; run < runs; ++run) {
        ExperimentConfig config = embed_config(700 + static_cast<std::uint64_t>(run));
        config.methods = {PostMethod::ftll, PostMethod::ftal,    PostMethod::prwt,
                          PostMethod::prwt_ft, PostMethod::prfl, PostMethod::prfl_ft,
                          PostMethod::adpr,    PostMethod::adpr_ft};
        const PipelineReport r = run_pipeline(config);
        bool all_verified = true;
        bool de_damaged = false;
        for (const MethodReport& m : r.methods) {
            all_verified = all_verified && m.ecc.verified && m.ecc_ber == 0.0 &&
                           m.ecc.groups_consumed <= 5;
            const bool pruning = m.method == PostMethod::prwt || m.method == PostMethod::prwt_ft ||
                                 m.method == PostMethod::prfl || m.method == PostMethod::prfl_ft ||
                                 m.method == PostMethod::adpr || m.method == PostMethod::adpr_ft;
            if (pruning && m.de_ber > 0.0) de_damaged = true;
        }
        if (all_verified) ++robust_runs;
        if (all_verified && de_damaged) ++separation_runs;
        std::printf("  run %d: ecc %s, de damaged under pruning: %s\n", run,
                    all_verified ? "all verified" : "FAILED", de_damaged ? "yes" : "no");
        std::fflush(stdout);
    }
    const double elapsed = seconds_since(start);
    char detail[128];
    std::snprintf(detail, sizeof(detail), "robust %d/10, ecc-vs-de separation %d/10, %.0fs",
                  robust_runs, separation_runs, elapsed);
    report(7, "all 8 post-processing methods survive; DE does not",
           robust_runs >= 9 && separation_runs >= 9 && elapsed < 900.0, detail);
}

// ---- criterion 8: numerical soundness --------------------------------------

bool gradient_check() {
    Xoshiro256StarStar rng(808);
    const double epsilon = 1e-6;
    for (int net = 0; net < 10; ++net) {
        const int dim = 2 + static_cast<int>(rng.bounded(4));
        const int hidden = 3 + static_cast<int>(rng.bounded(5));
        const int classes = 2 + static_cast<int>(rng.bounded(4));
        MlpClassifier model = MlpClassifier::init({dim, hidden, classes}, rng.next());
        for (int l = 0; l < model.layer_count(); ++l) {
            // keep pre-activations off the ReLU kink
            for (Eigen::Index r = 0; r < model.biases(l).size(); ++r) {
                model.biases(l)(r) = 0.4 * (2.0 * rng.uniform01() - 1.0);
            }
        }
        Eigen::MatrixXd x(dim, 6);
        for (int c = 0; c < 6; ++c) {
            for (int r = 0; r < dim; ++r) x(r, c) = 2.0 * rng.uniform01() - 1.0;
        }
        std::vector<int> y(6);
        for (auto& v : y) v = static_cast<int>(rng.bounded(classes));

        const Gradients grads = loss_gradients(model, x, y);
        for (int l = 0; l < model.layer_count(); ++l) {
            for (int probe = 0; probe < 8; ++probe) {
                const auto r = static_cast<Eigen::Index>(rng.bounded(model.weights(l).rows()));
                const auto c = static_cast<Eigen::Index>(rng.bounded(model.weights(l).cols()));
                const double saved = model.weights(l)(r, c);
                model.weights(l)(r, c) = saved + epsilon;
                const double up = cross_entropy_loss(model, x, y);
                model.weights(l)(r, c) = saved - epsilon;
                const double down = cross_entropy_loss(model, x, y);
                model.weights(l)(r, c) = saved;
                const double numeric = (up - down) / (2.0 * epsilon);
                const double analytic = grads.weights[l](r, c);
                const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-4});
                if (std::abs(numeric - analytic) / scale >= 1e-4) return false;
            }
        }
    }
    return true;
}

bool bcjr_vs_ml() {
    Xoshiro256StarStar rng(809);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RscParams params;
        if (rng.bounded(2)) {
            params = kDefaultRscParams;  // K = 4
        } else {
            params = RscParams::from_id("k3-7-5");  // K = 3
        }
        const Trellis trellis(params);
        const std::size_t n = 4 + rng.bounded(9);
        Bitstream input = random_bits(n, rng);
        const RscEncoded enc = rsc_encode(input, trellis);
        const int streams = 1;
        const double magnitude = std::log(0.92 / 0.08);

        RscChannelLlrs chan;
        auto to_llr = [&](const Bitstream& bits) {
            LlrSequence out(bits.size());
            for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ? -magnitude : magnitude;
            return out;
        };
        chan.systematic = to_llr(enc.systematic);
        chan.parity.push_back(to_llr(enc.parity[0]));
        chan.tail_systematic = to_llr(enc.tail.systematic);
        chan.tail_parity.push_back(to_llr(enc.tail.parity[0]));
        const std::size_t flips = rng.bounded(3);
        for (std::size_t f = 0; f < flips; ++f) {
            const std::size_t pos = rng.bounded(2 * n);
            if (pos < n) {
                chan.systematic[pos] *= -1.0;
            } else {
                chan.parity[0][pos - n] *= -1.0;
            }
        }

        // exhaustive maximum-likelihood sweep
        double best = -1e300;
        bool unique = false;
        Bitstream ml;
        for (std::uint64_t word = 0; word < (1ULL << n); ++word) {
            Bitstream candidate;
            for (std::size_t i = 0; i < n; ++i) candidate.push_back((word >> i) & 1);
            const RscEncoded cand = rsc_encode(candidate, trellis);
            double metric = 0.0;
            auto add = [&](const LlrSequence& llr, const Bitstream& bits) {
                for (std::size_t i = 0; i < llr.size(); ++i) {
                    metric += 0.5 * llr[i] * (bits[i] ? -1.0 : 1.0);
                }
            };
            add(chan.systematic, cand.systematic);
            add(chan.parity[0], cand.parity[0]);
            add(chan.tail_systematic, cand.tail.systematic);
            add(chan.tail_parity[0], cand.tail.parity[0]);
            if (metric > best + 1e-9) {
                best = metric;
                ml = candidate;
                unique = true;
            } else if (metric > best - 1e-9) {
                unique = false;
            }
        }
        if (!unique) continue;
        ++checked;
        if (rsc_decode(trellis, chan).hard_bits != ml) return false;
        (void)streams;
    }
    return checked >= 150;
}

void criterion8() {
    const bool grad = gradient_check();
    const bool ml = bcjr_vs_ml();
    report(8, "gradients match finite differences; BCJR matches exhaustive ML",
           grad && ml, std::string("gradcheck=") + (grad ? "ok" : "FAIL") +
                           " bcjr-vs-ml=" + (ml ? "ok" : "FAIL"));
}

// ---- criterion 9: metric arithmetic ----------------------------------------

void criterion9() {
    Xoshiro256StarStar rng(909);
    bool pass = true;

    const Bitstream truth = random_bits(4000, rng);
    Bitstream recovered = truth;
    std::vector<std::size_t> order(4000);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    fisher_yates_shuffle(order, rng);
    for (std::size_t i = 0; i < 120; ++i) recovered.flip(order[i]);
    pass = pass && ber(truth, recovered) == 0.03;

    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t bytes = 1 + rng.bounded(64);
        const Bitstream a = random_bits(8 * bytes, rng);
        const Bitstream b = random_bits(8 * bytes, rng);
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < a.size(); ++i) wrong += a[i] != b[i];
        pass = pass && ber(a, b) == static_cast<double>(wrong) / static_cast<double>(a.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < bytes; ++i) {
            int va = 0, vb = 0;
            for (std::size_t j = 0; j < 8; ++j) {
                va = (va << 1) | a[8 * i + j];
                vb = (vb << 1) | b[8 * i + j];
            }
            sum += static_cast<double>((va - vb)) * (va - vb);
        }
        pass = pass && mse_int8(a, b) == sum / static_cast<double>(bytes);
    }
    report(9, "BER and MSE match brute-force recomputation; 120/4000 = 0.03 exact", pass,
           pass ? "100 random pairs" : "mismatch");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
