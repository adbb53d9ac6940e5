#include "iea/rsc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace iea {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int poly_parity(std::uint32_t x) { return std::popcount(x) & 1; }

double max_star(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

double clamp_llr(double v) { return std::clamp(v, -kLlrClamp, kLlrClamp); }

// +1 for bit 0, -1 for bit 1.
double bit_sign(int bit) { return bit ? -1.0 : 1.0; }

void validate(const RscParams& p) {
    if (p.constraint_length < 2 || p.constraint_length > 16) {
        throw std::invalid_argument("RscParams: constraint length must be in [2, 16]");
    }
    const std::uint32_t limit = 1u << p.constraint_length;
    if (p.feedback_poly == 0 || p.feedback_poly >= limit) {
        throw std::invalid_argument("RscParams: feedback polynomial does not fit in K bits");
    }
    if ((p.feedback_poly & 1u) == 0) {
        throw std::invalid_argument("RscParams: feedback polynomial needs its lowest-order term");
    }
    if (p.parity_polys.empty()) {
        throw std::invalid_argument("RscParams: at least one parity polynomial required");
    }
    for (std::size_t i = 0; i < p.parity_polys.size(); ++i) {
        const std::uint32_t g = p.parity_polys[i];
        if (g == 0 || g >= limit) {
            throw std::invalid_argument("RscParams: parity polynomial does not fit in K bits");
        }
        for (std::size_t j = i + 1; j < p.parity_polys.size(); ++j) {
            if (g == p.parity_polys[j]) {
                throw std::invalid_argument("RscParams: parity polynomials must be distinct");
            }
        }
    }
}

}  // namespace

std::string RscParams::id() const {
    std::ostringstream os;
    os << "k" << constraint_length << "-" << std::oct << feedback_poly;
    for (auto g : parity_polys) os << "-" << std::oct << g;
    return os.str();
}

RscParams RscParams::from_id(const std::string& id) {
    if (id.empty() || id[0] != 'k') {
        throw std::invalid_argument("RscParams::from_id: malformed id '" + id + "'");
    }
    std::istringstream is(id.substr(1));
    RscParams p;
    p.parity_polys.clear();
    std::string token;
    if (!std::getline(is, token, '-')) throw std::invalid_argument("RscParams::from_id: missing K");
    p.constraint_length = std::stoi(token);
    if (!std::getline(is, token, '-')) throw std::invalid_argument("RscParams::from_id: missing feedback");
    p.feedback_poly = static_cast<std::uint32_t>(std::stoul(token, nullptr, 8));
    while (std::getline(is, token, '-')) {
        p.parity_polys.push_back(static_cast<std::uint32_t>(std::stoul(token, nullptr, 8)));
    }
    validate(p);
    return p;
}

Trellis::Trellis(const RscParams& params) : params_(params) {
    validate(params_);
    state_count_ = 1 << (params_.constraint_length - 1);
    const std::uint32_t state_mask = static_cast<std::uint32_t>(state_count_ - 1);
    next_state_.resize(2 * state_count_);
    parity_bits_.resize(2 * state_count_);
    termination_input_.resize(state_count_);

    for (int state = 0; state < state_count_; ++state) {
        const int feedback = poly_parity((params_.feedback_poly >> 1) & static_cast<std::uint32_t>(state));
        termination_input_[state] = feedback;  // makes the register shift in 0
        for (int input = 0; input < 2; ++input) {
            const int d = input ^ feedback;
            next_state_[2 * state + input] =
                static_cast<int>(((static_cast<std::uint32_t>(state) << 1) | static_cast<std::uint32_t>(d)) & state_mask);
            std::uint32_t outputs = 0;
            for (int s = 0; s < stream_count(); ++s) {
                const std::uint32_t g = params_.parity_polys[s];
                int p = poly_parity((g >> 1) & static_cast<std::uint32_t>(state));
                p ^= static_cast<int>(g & 1u) & d;
                outputs |= static_cast<std::uint32_t>(p) << s;
            }
            parity_bits_[2 * state + input] = outputs;
        }
    }
}

RscEncoded rsc_encode(const Bitstream& input, const Trellis& trellis) {
    if (input.empty()) {
        throw std::invalid_argument("rsc_encode: empty input");
    }
    const int k = trellis.stream_count();
    RscEncoded out;
    out.systematic = input;
    out.parity.assign(k, Bitstream());
    out.tail.parity.assign(k, Bitstream());

    int state = 0;
    for (std::size_t t = 0; t < input.size(); ++t) {
        const int u = input[t];
        for (int s = 0; s < k; ++s) out.parity[s].push_back(trellis.parity_bit(state, u, s));
        state = trellis.next_state(state, u);
    }
    for (int r = 0; r < trellis.tail_length(); ++r) {
        const int u = trellis.termination_input(state);
        out.tail.systematic.push_back(u);
        for (int s = 0; s < k; ++s) out.tail.parity[s].push_back(trellis.parity_bit(state, u, s));
        state = trellis.next_state(state, u);
    }
    // terminated by construction
    if (state != 0) throw std::logic_error("rsc_encode: termination failed");
    return out;
}

RscDecodeResult rsc_decode(const Trellis& trellis, const RscChannelLlrs& channel,
                           const LlrSequence& apriori) {
    const std::size_t n = channel.systematic.size();
    const int streams = static_cast<int>(channel.parity.size());
    const int tail = trellis.tail_length();
    if (n == 0) throw std::invalid_argument("rsc_decode: empty systematic sequence");
    if (streams < 1 || streams > trellis.stream_count()) {
        throw std::invalid_argument("rsc_decode: parity stream count out of range");
    }
    for (const auto& p : channel.parity) {
        if (p.size() != n) throw std::invalid_argument("rsc_decode: parity length mismatch");
    }
    if (!apriori.empty() && apriori.size() != n) {
        throw std::invalid_argument("rsc_decode: apriori length mismatch");
    }
    const bool terminated = !channel.tail_systematic.empty();
    if (terminated) {
        if (channel.tail_systematic.size() != static_cast<std::size_t>(tail) ||
            channel.tail_parity.size() != static_cast<std::size_t>(streams)) {
            throw std::invalid_argument("rsc_decode: tail shape mismatch");
        }
        for (const auto& p : channel.tail_parity) {
            if (p.size() != static_cast<std::size_t>(tail)) {
                throw std::invalid_argument("rsc_decode: tail parity length mismatch");
            }
        }
    }

    const int S = trellis.state_count();
    const std::size_t steps = n + (terminated ? static_cast<std::size_t>(tail) : 0);

    // Branch metric for (state, input) at step t.
    auto gamma = [&](std::size_t t, int state, int input) {
        double g = 0.0;
        if (t < n) {
            double lsys = clamp_llr(channel.systematic[t]);
            if (!apriori.empty()) lsys += clamp_llr(apriori[t]);
            g += 0.5 * lsys * bit_sign(input);
            for (int s = 0; s < streams; ++s) {
                g += 0.5 * clamp_llr(channel.parity[s][t]) *
                     bit_sign(trellis.parity_bit(state, input, s));
            }
        } else {
            const std::size_t r = t - n;
            g += 0.5 * clamp_llr(channel.tail_systematic[r]) * bit_sign(input);
            for (int s = 0; s < streams; ++s) {
                g += 0.5 * clamp_llr(channel.tail_parity[s][r]) *
                     bit_sign(trellis.parity_bit(state, input, s));
            }
        }
        return g;
    };
    // In the tail the input is forced to the termination bit of each state.
    auto inputs_at = [&](std::size_t t, int state, int& lo, int& hi) {
        if (t < n) {
            lo = 0;
            hi = 1;
        } else {
            lo = hi = trellis.termination_input(state);
        }
    };

    std::vector<double> alpha((steps + 1) * S, kNegInf);
    std::vector<double> beta((steps + 1) * S, kNegInf);
    alpha[0] = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        double best = kNegInf;
        for (int state = 0; state < S; ++state) {
            const double a = alpha[t * S + state];
            if (a == kNegInf) continue;
            int lo, hi;
            inputs_at(t, state, lo, hi);
            for (int u = lo; u <= hi; ++u) {
                const int ns = trellis.next_state(state, u);
                double& cell = alpha[(t + 1) * S + ns];
                cell = max_star(cell, a + gamma(t, state, u));
            }
        }
        for (int state = 0; state < S; ++state) best = std::max(best, alpha[(t + 1) * S + state]);
        if (best != kNegInf) {
            for (int state = 0; state < S; ++state) alpha[(t + 1) * S + state] -= best;
        }
    }

    if (terminated) {
        beta[steps * S + 0] = 0.0;
    } else {
        for (int state = 0; state < S; ++state) beta[steps * S + state] = 0.0;
    }
    for (std::size_t t = steps; t-- > 0;) {
        double best = kNegInf;
        for (int state = 0; state < S; ++state) {
            int lo, hi;
            inputs_at(t, state, lo, hi);
            double acc = kNegInf;
            for (int u = lo; u <= hi; ++u) {
                const int ns = trellis.next_state(state, u);
                const double b = beta[(t + 1) * S + ns];
                if (b == kNegInf) continue;
                acc = max_star(acc, b + gamma(t, state, u));
            }
            beta[t * S + state] = acc;
            best = std::max(best, acc);
        }
        if (best != kNegInf) {
            for (int state = 0; state < S; ++state) beta[t * S + state] -= best;
        }
    }

    RscDecodeResult out;
    out.posterior.resize(n);
    out.extrinsic.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        double metric0 = kNegInf;
        double metric1 = kNegInf;
        for (int state = 0; state < S; ++state) {
            const double a = alpha[t * S + state];
            if (a == kNegInf) continue;
            for (int u = 0; u < 2; ++u) {
                const int ns = trellis.next_state(state, u);
                const double b = beta[(t + 1) * S + ns];
                if (b == kNegInf) continue;
                const double m = a + gamma(t, state, u) + b;
                if (u == 0) {
                    metric0 = max_star(metric0, m);
                } else {
                    metric1 = max_star(metric1, m);
                }
            }
        }
        double llr;
        if (metric0 == kNegInf) {
            llr = -kLlrClamp;
        } else if (metric1 == kNegInf) {
            llr = kLlrClamp;
        } else {
            llr = metric0 - metric1;
        }
        out.posterior[t] = llr;
        double lsys = clamp_llr(channel.systematic[t]);
        if (!apriori.empty()) lsys += clamp_llr(apriori[t]);
        out.extrinsic[t] = llr - lsys;
        out.hard_bits.push_back(llr >= 0.0 ? 0 : 1);
    }
    return out;
}

}  // namespace iea
