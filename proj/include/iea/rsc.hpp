#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iea/bitstream.hpp"

namespace iea {

// Recursive systematic convolutional code parameters.
//
// Polynomials are K-bit words with bit j holding the coefficient of D^j,
// so bit 0 (the lowest-order term) taps the bit entering the register.
// The feedback polynomial must have bit 0 set for the systematic
// recursion to be well defined.
struct RscParams {
    int constraint_length = 4;                      // K
    std::uint32_t feedback_poly = 013;              // 1 + D + D^3
    std::vector<std::uint32_t> parity_polys = {015, 017};

    int stream_count() const { return static_cast<int>(parity_polys.size()); }
    int tail_length() const { return constraint_length - 1; }

    // Compact id string "k<K>-<fb>-<p1>-<p2>..." with octal polynomials;
    // recorded in attack metadata so the recovery side can rebuild the code.
    std::string id() const;
    static RscParams from_id(const std::string& id);
};

inline const RscParams kDefaultRscParams{};

// Transition tables for the shift-register recursion. State bit 0 is the
// most recent memory element; feeding tail_length() termination inputs
// drives any state to 0.
class Trellis {
public:
    explicit Trellis(const RscParams& params);

    int state_count() const { return state_count_; }
    int stream_count() const { return static_cast<int>(params_.parity_polys.size()); }
    int tail_length() const { return params_.tail_length(); }
    const RscParams& params() const { return params_; }

    int next_state(int state, int input) const { return next_state_[2 * state + input]; }
    int parity_bit(int state, int input, int stream) const {
        return (parity_bits_[2 * state + input] >> stream) & 1;
    }
    int termination_input(int state) const { return termination_input_[state]; }

private:
    RscParams params_;
    int state_count_;
    std::vector<int> next_state_;               // [2*state + input]
    std::vector<std::uint32_t> parity_bits_;    // [2*state + input], bit per stream
    std::vector<int> termination_input_;        // [state]
};

struct RscTail {
    Bitstream systematic;                  // K-1 termination input bits
    std::vector<Bitstream> parity;         // per stream, K-1 bits each
};

struct RscEncoded {
    Bitstream systematic;                  // equals the input
    std::vector<Bitstream> parity;         // k streams, same length as input
    RscTail tail;                          // encoder ends in state 0
};

RscEncoded rsc_encode(const Bitstream& input, const Trellis& trellis);

// Per-bit log-likelihood ratios. Positive means bit 0 is more likely;
// zero encodes an erasure. Magnitudes are clamped to kLlrClamp inside the
// decoders.
using LlrSequence = std::vector<double>;

inline constexpr double kLlrClamp = 50.0;

// Channel observations for one constituent decoder. Supplying
// tail.systematic of length K-1 anchors the backward recursion at state 0
// (terminated decoding); leaving the tail empty decodes unterminated.
struct RscChannelLlrs {
    LlrSequence systematic;
    std::vector<LlrSequence> parity;       // i streams, 1 <= i <= k
    LlrSequence tail_systematic;           // K-1 values or empty
    std::vector<LlrSequence> tail_parity;  // i x (K-1) values, or empty
};

struct RscDecodeResult {
    Bitstream hard_bits;                   // bitwise MAP decisions
    LlrSequence posterior;                 // full a-posteriori LLRs
    LlrSequence extrinsic;                 // posterior minus channel/a-priori
};

// Log-MAP BCJR with the exact Jacobian correction. `apriori` carries the
// extrinsic input for turbo iterations; empty means uniform priors.
RscDecodeResult rsc_decode(const Trellis& trellis, const RscChannelLlrs& channel,
                           const LlrSequence& apriori = {});

}  // namespace iea
