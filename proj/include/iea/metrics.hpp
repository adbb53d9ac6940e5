#pragma once

#include "iea/bitstream.hpp"

namespace iea {

// Fraction of incorrect bits. Streams must have equal length.
double ber(const Bitstream& truth, const Bitstream& recovered);

// Interprets each 8-bit MSB-first block as an unsigned integer and
// returns the mean squared difference. Lengths must match and be
// divisible by 8.
double mse_int8(const Bitstream& truth, const Bitstream& recovered);

}  // namespace iea
