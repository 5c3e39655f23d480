#pragma once

#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pepfsm/amino.hpp"
#include "pepfsm/errors.hpp"

namespace pepfsm {

// A pattern unit: canonical residue sequence plus its dense id within a pool.
struct Peptide {
    int id = -1;
    std::string sequence;

    bool operator==(const Peptide&) const = default;
};

// Deduplicated, densely indexed peptide set. Construction validates residues
// and the dipeptide minimum length, drops duplicates keeping the first
// occurrence, and assigns ids 0..n-1 in input order.
class PeptidePool {
public:
    PeptidePool() = default;

    const std::vector<Peptide>& peptides() const { return peptides_; }
    std::size_t size() const { return peptides_.size(); }
    bool empty() const { return peptides_.empty(); }
    const Peptide& operator[](std::size_t id) const { return peptides_[id]; }

    const std::string& sequence(std::size_t id) const { return peptides_[id].sequence; }

    // Pool over a subset of this pool's peptides, renumbered 0..k-1 in the
    // order given. Callers keep `ids` around to map local ids back.
    PeptidePool subset(const std::vector<int>& ids) const {
        PeptidePool sub;
        sub.peptides_.reserve(ids.size());
        for (int id : ids)
            sub.peptides_.push_back({static_cast<int>(sub.peptides_.size()), peptides_[id].sequence});
        return sub;
    }

    bool operator==(const PeptidePool&) const = default;

    friend PeptidePool build_pool(const std::vector<std::string>& sequences);

private:
    std::vector<Peptide> peptides_;
};

inline PeptidePool build_pool(const std::vector<std::string>& sequences) {
    PeptidePool pool;
    std::unordered_set<std::string> seen;
    for (const auto& seq : sequences) {
        if (seq.size() < 2)
            throw Error(Errc::peptide_too_short,
                        "peptide '" + seq + "' is shorter than a dipeptide");
        encode_sequence(seq);  // residue validation
        if (!seen.insert(seq).second) continue;
        pool.peptides_.push_back({static_cast<int>(pool.peptides_.size()), seq});
    }
    return pool;
}

}  // namespace pepfsm
