#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pepfsm {

enum class Errc {
    empty_input,
    malformed_fasta,
    invalid_residue,
    peptide_too_short,
    empty_pool,
    invalid_config,
    single_peptide_exceeds_cap,
    pool_too_large,
    mismatched_pools,
    parse_error,
    io_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::empty_input: return "EmptyInput";
        case Errc::malformed_fasta: return "MalformedFasta";
        case Errc::invalid_residue: return "InvalidResidue";
        case Errc::peptide_too_short: return "PeptideTooShort";
        case Errc::empty_pool: return "EmptyPool";
        case Errc::invalid_config: return "InvalidConfig";
        case Errc::single_peptide_exceeds_cap: return "SinglePeptideExceedsCap";
        case Errc::pool_too_large: return "PoolTooLarge";
        case Errc::mismatched_pools: return "MismatchedPools";
        case Errc::parse_error: return "ParseError";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

// Library-wide error type. `position` is a 0-based offset into the offending
// input where that makes sense (e.g. InvalidResidue); `peptide_id` identifies
// the offending peptide for packing errors.
class Error : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Error(Errc code, const std::string& message, std::size_t position = npos, int peptide_id = -1)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code),
          position_(position),
          peptide_id_(peptide_id) {}

    Errc code() const noexcept { return code_; }
    std::size_t position() const noexcept { return position_; }
    int peptide_id() const noexcept { return peptide_id_; }

private:
    Errc code_;
    std::size_t position_;
    int peptide_id_;
};

}  // namespace pepfsm
