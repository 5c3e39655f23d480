#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pepfsm/errors.hpp"

namespace pepfsm {

// The 20 canonical residues in alphabetical order. A residue's 5-bit code is
// its rank in this string: A=0, C=1, D=2, E=3, ..., Y=19.
inline constexpr std::string_view kResidues = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr int kAlphabetSize = 20;
inline constexpr int kResidueBits = 5;

using ResidueCode = std::uint8_t;

namespace detail {

constexpr std::array<std::int8_t, 26> make_letter_ranks() {
    std::array<std::int8_t, 26> ranks{};
    for (auto& r : ranks) r = -1;
    for (int i = 0; i < kAlphabetSize; ++i) ranks[kResidues[i] - 'A'] = static_cast<std::int8_t>(i);
    return ranks;
}

inline constexpr std::array<std::int8_t, 26> kLetterRanks = make_letter_ranks();

}  // namespace detail

constexpr bool is_canonical(char letter) {
    return letter >= 'A' && letter <= 'Z' && detail::kLetterRanks[letter - 'A'] >= 0;
}

// Pre: is_canonical(letter).
constexpr ResidueCode residue_code(char letter) {
    return static_cast<ResidueCode>(detail::kLetterRanks[letter - 'A']);
}

// Pre: 0 <= code < 20.
constexpr char residue_letter(ResidueCode code) {
    return kResidues[code];
}

// Bit j of a code, with j=0 the most significant of the 5 bits.
constexpr int residue_bit(ResidueCode code, int bit_index) {
    return (code >> (kResidueBits - 1 - bit_index)) & 1;
}

inline std::vector<ResidueCode> encode_sequence(std::string_view seq) {
    std::vector<ResidueCode> codes;
    codes.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!is_canonical(seq[i]))
            throw Error(Errc::invalid_residue,
                        "non-canonical residue '" + std::string(1, seq[i]) + "' at position " +
                            std::to_string(i),
                        i);
        codes.push_back(residue_code(seq[i]));
    }
    return codes;
}

// The five binary streams of a residue sequence: streams[j][i] is bit j
// (MSB first) of the code of residue i.
struct BitStreams {
    std::array<std::string, kResidueBits> streams;

    bool operator==(const BitStreams&) const = default;
};

inline BitStreams bit_split_strings(std::string_view seq) {
    BitStreams out;
    for (auto& s : out.streams) s.reserve(seq.size());
    for (ResidueCode c : encode_sequence(seq))
        for (int j = 0; j < kResidueBits; ++j)
            out.streams[j].push_back(residue_bit(c, j) ? '1' : '0');
    return out;
}

}  // namespace pepfsm
