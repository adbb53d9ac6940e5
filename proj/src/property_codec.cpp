#include "iea/property_codec.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace iea {
namespace {

void append_pct(std::string& out, double value) {
    if (!(value >= 0.0 && value <= 99.99)) {
        throw std::invalid_argument("encode_properties: percentage outside [0, 99.99]");
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%05.2f", value);
    out += buf;
}

bool printable_ascii(std::uint8_t byte) { return byte >= 0x20 && byte <= 0x7E; }

PropertyField parse_field(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                          std::size_t width, int dot_position) {
    PropertyField field;
    bool well_formed = true;
    for (std::size_t i = 0; i < width; ++i) {
        const std::uint8_t byte = bytes[offset + i];
        field.text += printable_ascii(byte) ? static_cast<char>(byte) : 'x';
        const bool expect_dot = dot_position >= 0 && i == static_cast<std::size_t>(dot_position);
        if (expect_dot) {
            well_formed = well_formed && byte == '.';
        } else {
            well_formed = well_formed && std::isdigit(byte) != 0;
        }
    }
    field.ok = well_formed;
    if (field.ok) field.value = std::stod(field.text);
    return field;
}

}  // namespace

Bitstream encode_properties(const PropertyRecord& record) {
    if (record.average_age < 0 || record.average_age > 99) {
        throw std::invalid_argument("encode_properties: average age outside [0, 99]");
    }
    std::string text;
    char age[4];
    std::snprintf(age, sizeof(age), "%02d", record.average_age);
    text += age;
    append_pct(text, record.female_pct);
    for (double pct : record.race_pct) append_pct(text, pct);
    std::vector<std::uint8_t> bytes(text.begin(), text.end());
    return bytes_to_bits(bytes);
}

bool DecodedProperties::all_ok() const {
    bool ok = average_age.ok && female_pct.ok;
    for (const auto& field : race_pct) ok = ok && field.ok;
    return ok;
}

DecodedProperties decode_properties(const Bitstream& bits) {
    if (bits.size() != kPropertyMessageBits) {
        throw std::invalid_argument("decode_properties: expected exactly 256 bits");
    }
    const std::vector<std::uint8_t> bytes = bits_to_bytes(bits);
    DecodedProperties out;
    out.average_age = parse_field(bytes, 0, 2, -1);
    out.female_pct = parse_field(bytes, 2, 5, 2);
    for (std::size_t r = 0; r < out.race_pct.size(); ++r) {
        out.race_pct[r] = parse_field(bytes, 7 + 5 * r, 5, 2);
    }
    return out;
}

}  // namespace iea
