#pragma once

#include <array>
#include <string>

#include "iea/bitstream.hpp"

namespace iea {

// Demographic-property record encoded as a fixed-width ASCII stream:
// average age as two digits, the female fraction and each of the five
// race fractions as "dd.dd" (zero-padded). 32 characters = 256 bits.
struct PropertyRecord {
    int average_age = 0;                     // 0..99
    double female_pct = 0.0;                 // 0..99.99
    std::array<double, 5> race_pct = {0, 0, 0, 0, 0};  // White, API, AIE, Black, Other
};

inline constexpr std::size_t kPropertyMessageBits = 8 * (2 + 5 + 5 * 5);

Bitstream encode_properties(const PropertyRecord& record);

// One decoded field: the recovered characters with every byte that is
// not printable ASCII shown as 'x', plus whether the field parsed as a
// well-formed value.
struct PropertyField {
    std::string text;
    bool ok = false;
    double value = 0.0;  // meaningful only when ok
};

struct DecodedProperties {
    PropertyField average_age;
    PropertyField female_pct;
    std::array<PropertyField, 5> race_pct;

    bool all_ok() const;
};

DecodedProperties decode_properties(const Bitstream& bits);

}  // namespace iea
