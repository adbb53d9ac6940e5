#include "iea/turbo.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "iea/prng.hpp"

namespace iea {

Interleaver::Interleaver(std::vector<std::size_t> perm) : perm_(std::move(perm)) {
    inverse_.resize(perm_.size());
    std::vector<std::uint8_t> seen(perm_.size(), 0);
    for (std::size_t i = 0; i < perm_.size(); ++i) {
        const std::size_t p = perm_[i];
        if (p >= perm_.size() || seen[p]) {
            throw std::invalid_argument("Interleaver: permutation is not a bijection");
        }
        seen[p] = 1;
        inverse_[p] = i;
    }
}

Bitstream Interleaver::apply(const Bitstream& x) const {
    return Bitstream(apply(x.bits()));
}

Bitstream Interleaver::apply_inverse(const Bitstream& x) const {
    return Bitstream(apply_inverse(x.bits()));
}

Interleaver make_interleaver(std::size_t length, std::uint64_t seed) {
    if (length < 1) throw std::invalid_argument("make_interleaver: length must be >= 1");
    std::vector<std::size_t> perm(length);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Xoshiro256StarStar rng(seed);
    fisher_yates_shuffle(perm, rng);
    return Interleaver(std::move(perm));
}

TurboCodeword TurboCodeword::systematic_only(Bitstream framed) {
    TurboCodeword cw;
    cw.systematic = std::move(framed);
    cw.k = 0;
    return cw;
}

TurboCodeword turbo_encode(const ChecksummedMessage& mc, const RscParams& params,
                           std::uint64_t interleaver_seed) {
    const Trellis trellis(params);
    TurboCodeword cw;
    cw.params = params;
    cw.k = params.stream_count();
    cw.interleaver_seed = interleaver_seed;

    RscEncoded enc_a = rsc_encode(mc.framed, trellis);
    cw.systematic = enc_a.systematic;
    cw.parity_a = std::move(enc_a.parity);
    cw.tail_a = std::move(enc_a.tail);

    const Interleaver pi = make_interleaver(mc.framed.size(), interleaver_seed);
    const Bitstream permuted = pi.apply(mc.framed);
    RscEncoded enc_b = rsc_encode(permuted, trellis);
    // The permuted systematic block and the B-side tail are redundant and
    // never transmitted; decoder B runs unterminated.
    cw.parity_b = std::move(enc_b.parity);
    return cw;
}

LlrSequence hard_to_llr(const Bitstream& bits, const std::vector<std::uint8_t>& erasures,
                        double assumed_crossover) {
    if (!(assumed_crossover > 0.0 && assumed_crossover < 0.5)) {
        throw std::invalid_argument("hard_to_llr: crossover must be in (0, 0.5)");
    }
    if (!erasures.empty() && erasures.size() != bits.size()) {
        throw std::invalid_argument("hard_to_llr: erasure mask length mismatch");
    }
    const double magnitude = std::log((1.0 - assumed_crossover) / assumed_crossover);
    LlrSequence out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (!erasures.empty() && erasures[i]) {
            out[i] = 0.0;
        } else {
            out[i] = bits[i] ? -magnitude : magnitude;
        }
    }
    return out;
}

TurboDecodeResult turbo_decode(const TurboChannelLlrs& received, const Trellis& trellis,
                               const Interleaver& interleaver, const DecodeConfig& config) {
    const std::size_t n = received.systematic.size();
    const std::size_t streams = received.parity_a.size();
    if (config.max_iterations < 1) {
        throw std::invalid_argument("turbo_decode: max_iterations must be >= 1");
    }
    if (streams < 1 || received.parity_b.size() != streams) {
        throw std::invalid_argument("turbo_decode: need matching parity stream counts >= 1");
    }
    if (interleaver.length() != n) {
        throw std::invalid_argument("turbo_decode: interleaver length mismatch");
    }

    RscChannelLlrs chan_a;
    chan_a.systematic = received.systematic;
    chan_a.parity = received.parity_a;
    chan_a.tail_systematic = received.tail_systematic;
    chan_a.tail_parity = received.tail_parity_a;

    RscChannelLlrs chan_b;
    chan_b.systematic = interleaver.apply(received.systematic);
    chan_b.parity = received.parity_b;

    auto hard_from = [&](const LlrSequence& posterior) {
        Bitstream hard;
        for (double v : posterior) hard.push_back(v >= 0.0 ? 0 : 1);
        return hard;
    };

    TurboDecodeResult result;
    LlrSequence apriori_a;  // empty on the first pass
    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        result.iterations_used = iter;

        RscDecodeResult res_a = rsc_decode(trellis, chan_a, apriori_a);
        result.hard_bits = res_a.hard_bits;
        if (config.early_exit && config.early_exit(result.hard_bits)) {
            result.converged = true;
            return result;
        }

        const LlrSequence apriori_b = interleaver.apply(res_a.extrinsic);
        RscDecodeResult res_b = rsc_decode(trellis, chan_b, apriori_b);
        result.hard_bits = hard_from(interleaver.apply_inverse(res_b.posterior));
        if (config.early_exit && config.early_exit(result.hard_bits)) {
            result.converged = true;
            return result;
        }

        apriori_a = interleaver.apply_inverse(res_b.extrinsic);
    }
    return result;
}

}  // namespace iea
