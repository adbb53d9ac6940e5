#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "iea/bitstream.hpp"
#include "iea/crc32.hpp"
#include "iea/rsc.hpp"

namespace iea {

// Seeded bijective permutation. apply(x)[i] = x[perm[i]].
class Interleaver {
public:
    Interleaver() = default;
    Interleaver(std::vector<std::size_t> perm);

    std::size_t length() const { return perm_.size(); }
    const std::vector<std::size_t>& permutation() const { return perm_; }

    template <typename Seq>
    Seq apply(const Seq& x) const {
        Seq out(x.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) out[i] = x[perm_[i]];
        return out;
    }
    template <typename Seq>
    Seq apply_inverse(const Seq& x) const {
        Seq out(x.size());
        for (std::size_t i = 0; i < perm_.size(); ++i) out[perm_[i]] = x[i];
        return out;
    }

    Bitstream apply(const Bitstream& x) const;
    Bitstream apply_inverse(const Bitstream& x) const;

private:
    std::vector<std::size_t> perm_;
    std::vector<std::size_t> inverse_;
};

// Fisher-Yates permutation from the toolkit PRNG; identical on every
// platform for a given (length, seed).
Interleaver make_interleaver(std::size_t length, std::uint64_t seed);

// The recovery side re-derives the interleaver seed from the attack
// metadata's master seed with this fixed rule.
inline constexpr std::uint64_t derive_interleaver_seed(std::uint64_t master_seed) {
    return master_seed + 1;  // wrapping
}

// Parallel-concatenated codeword over m_c: systematic block, k parity
// streams from the direct encoder (with its termination tail) and k
// parity streams from the interleaved encoder (unterminated). Group
// order for embedding is [m_c, e_1, e_bar_1, ..., e_k, e_bar_k].
struct TurboCodeword {
    Bitstream systematic;                 // m_c
    std::vector<Bitstream> parity_a;      // e_1..e_k
    std::vector<Bitstream> parity_b;      // e_bar_1..e_bar_k
    RscTail tail_a;                       // constituent-A termination bits
    RscParams params;
    std::uint64_t interleaver_seed = 0;
    int k = 0;

    int group_count() const { return 2 * k + 1; }

    // Degenerate k = 0 codeword: the framed message alone, one group.
    static TurboCodeword systematic_only(Bitstream framed);
};

TurboCodeword turbo_encode(const ChecksummedMessage& mc, const RscParams& params,
                           std::uint64_t interleaver_seed);

// Maps hard bits (with erasures) to LLRs under an assumed crossover
// probability: bit 0 -> +ln((1-p)/p), bit 1 -> -ln((1-p)/p), erased -> 0.
LlrSequence hard_to_llr(const Bitstream& bits, const std::vector<std::uint8_t>& erasures,
                        double assumed_crossover);

struct DecodeConfig {
    int max_iterations = 10;
    double assumed_crossover = 0.05;
    // Checked against the current hard decision after every constituent
    // pass; decoding stops as soon as it returns true. Defaults to the
    // CRC-32 integrity check. An empty function disables early exit.
    std::function<bool(const Bitstream&)> early_exit = [](const Bitstream& hard) {
        return verify(hard).ok;
    };
};

// Received LLRs for the first i streams of each constituent.
struct TurboChannelLlrs {
    LlrSequence systematic;                 // n values
    std::vector<LlrSequence> parity_a;      // i x n
    std::vector<LlrSequence> parity_b;      // i x n
    LlrSequence tail_systematic;            // K-1 values (A side)
    std::vector<LlrSequence> tail_parity_a; // i x (K-1)
};

struct TurboDecodeResult {
    Bitstream hard_bits;
    int iterations_used = 0;
    bool converged = false;
};

// Standard iterative decoding: constituent A over (systematic, e'_1..e'_i),
// constituent B over the interleaved systematic and e_bar'_1..e_bar'_i,
// extrinsic LLRs exchanged through the interleaver each pass.
TurboDecodeResult turbo_decode(const TurboChannelLlrs& received, const Trellis& trellis,
                               const Interleaver& interleaver, const DecodeConfig& config);

}  // namespace iea
