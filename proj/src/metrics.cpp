#include "iea/metrics.hpp"

#include <stdexcept>

namespace iea {

double ber(const Bitstream& truth, const Bitstream& recovered) {
    if (truth.size() != recovered.size()) {
        throw std::invalid_argument("ber: length mismatch");
    }
    if (truth.empty()) throw std::invalid_argument("ber: empty streams");
    return static_cast<double>(hamming_distance(truth, recovered)) /
           static_cast<double>(truth.size());
}

double mse_int8(const Bitstream& truth, const Bitstream& recovered) {
    if (truth.size() != recovered.size()) {
        throw std::invalid_argument("mse_int8: length mismatch");
    }
    if (truth.empty() || truth.size() % 8 != 0) {
        throw std::invalid_argument("mse_int8: length must be a nonzero multiple of 8");
    }
    const std::vector<std::uint8_t> a = bits_to_bytes(truth);
    const std::vector<std::uint8_t> b = bits_to_bytes(recovered);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

}  // namespace iea
