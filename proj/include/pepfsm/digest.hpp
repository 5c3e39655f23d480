#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "pepfsm/amino.hpp"
#include "pepfsm/errors.hpp"
#include "pepfsm/fasta.hpp"

namespace pepfsm {

struct DigestConfig {
    int missed_cleavages = 0;
    std::size_t min_len = 2;
    std::size_t max_len = std::numeric_limits<std::size_t>::max();

    void validate() const {
        if (missed_cleavages < 0)
            throw Error(Errc::invalid_config, "missed_cleavages must be >= 0");
        if (min_len < 2) throw Error(Errc::invalid_config, "min_len must be >= 2");
        if (min_len > max_len) throw Error(Errc::invalid_config, "min_len exceeds max_len");
    }
};

// Tryptic cleavage: cut C-terminal to K or R unless the next residue is P.
// The fragments concatenate back to the input sequence.
inline std::vector<std::string> tryptic_fragments(std::string_view sequence) {
    for (std::size_t i = 0; i < sequence.size(); ++i)
        if (!is_canonical(sequence[i]))
            throw Error(Errc::invalid_residue,
                        "non-canonical residue '" + std::string(1, sequence[i]) +
                            "' at position " + std::to_string(i),
                        i);

    std::vector<std::string> fragments;
    std::size_t start = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        bool site = (sequence[i] == 'K' || sequence[i] == 'R') &&
                    (i + 1 == sequence.size() || sequence[i + 1] != 'P');
        if (site || i + 1 == sequence.size()) {
            fragments.emplace_back(sequence.substr(start, i + 1 - start));
            start = i + 1;
        }
    }
    return fragments;
}

// In-silico digestion: tryptic fragments, plus concatenations of up to
// missed_cleavages+1 adjacent fragments, length-filtered last. Emission order
// is all zero-miss fragments, then one-miss concatenations, and so on.
inline std::vector<std::string> digest(const ProteinRecord& protein, const DigestConfig& cfg = {}) {
    cfg.validate();
    auto fragments = tryptic_fragments(protein.sequence);

    std::vector<std::string> peptides;
    for (int misses = 0; misses <= cfg.missed_cleavages; ++misses) {
        for (std::size_t i = 0; i + misses < fragments.size(); ++i) {
            std::string joined;
            for (std::size_t k = i; k <= i + misses; ++k) joined += fragments[k];
            if (joined.size() >= cfg.min_len && joined.size() <= cfg.max_len)
                peptides.push_back(std::move(joined));
        }
    }
    return peptides;
}

}  // namespace pepfsm
