#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pepfsm/errors.hpp"

namespace pepfsm {

struct ProteinRecord {
    std::string header;
    std::string sequence;

    bool operator==(const ProteinRecord&) const = default;
};

namespace detail {

inline std::string rstrip(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

}  // namespace detail

// FASTA: '>' header lines, sequence lines concatenated with whitespace
// removed and letters uppercased. Sequence data before the first header is
// malformed; so is a header with no sequence.
inline std::vector<ProteinRecord> parse_fasta(std::string_view text) {
    std::vector<ProteinRecord> records;
    std::istringstream in{std::string(text)};
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        line = detail::rstrip(std::move(line));
        if (line.empty()) continue;
        if (line[0] == '>') {
            if (saw_header && records.back().sequence.empty())
                throw Error(Errc::malformed_fasta,
                            "record '" + records.back().header + "' has no sequence");
            std::string header = detail::rstrip(line.substr(1));
            records.push_back({std::move(header), ""});
            saw_header = true;
        } else {
            if (!saw_header)
                throw Error(Errc::malformed_fasta, "sequence data before first '>' header");
            for (char ch : line)
                if (!std::isspace(static_cast<unsigned char>(ch)))
                    records.back().sequence.push_back(
                        static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
        }
    }
    if (records.empty()) throw Error(Errc::empty_input, "no FASTA records in input");
    if (records.back().sequence.empty())
        throw Error(Errc::malformed_fasta,
                    "record '" + records.back().header + "' has no sequence");
    return records;
}

// Plain peptide list: one peptide per line, '#' comment lines ignored,
// trailing whitespace stripped, letters uppercased.
inline std::vector<std::string> parse_peptide_list(std::string_view text) {
    std::vector<std::string> peptides;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        line = detail::rstrip(std::move(line));
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        peptides.push_back(std::move(line));
    }
    return peptides;
}

}  // namespace pepfsm
