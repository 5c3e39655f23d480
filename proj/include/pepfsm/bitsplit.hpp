#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pepfsm/aho_corasick.hpp"
#include "pepfsm/amino.hpp"
#include "pepfsm/errors.hpp"
#include "pepfsm/id_set.hpp"
#include "pepfsm/peptide.hpp"

namespace pepfsm {

// Binary-input machine for one bit position of the 5-bit residue code.
// Produced by subset construction over the failure-free DFA; `state_sets`
// keeps the witness subsets for audit. State 0 is the start ({AC root});
// numbering is BFS discovery order with the 0-edge explored before the 1-edge.
struct BitSplitFsm {
    int bit_index = 0;
    std::vector<std::array<StateId, 2>> next;
    std::vector<IdSet> pmv;
    std::vector<std::vector<StateId>> state_sets;
    std::size_t pool_size = 0;

    std::size_t state_count() const { return next.size(); }
};

namespace detail {

// Codes whose bit `j` (MSB first) equals b, per (j, b).
inline const std::array<std::array<std::vector<ResidueCode>, 2>, kResidueBits>& codes_by_bit() {
    static const auto table = [] {
        std::array<std::array<std::vector<ResidueCode>, 2>, kResidueBits> t;
        for (int j = 0; j < kResidueBits; ++j)
            for (ResidueCode c = 0; c < kAlphabetSize; ++c)
                t[j][residue_bit(c, j)].push_back(c);
        return t;
    }();
    return table;
}

struct StateSetHash {
    std::size_t operator()(const std::vector<StateId>& v) const {
        std::size_t h = 0xcbf29ce484222325ull;
        for (StateId s : v) {
            h ^= s;
            h *= 0x100000001b3ull;
        }
        return h;
    }
};

// Subset construction over `dfa_next` restricted to one bit position. When
// `abort_above` is given, returns nullopt as soon as more states than that
// are discovered (used for packing fit checks); `with_witness` controls
// whether pmv/state_sets are materialized.
inline std::optional<BitSplitFsm> subset_construct(const AcAutomaton& a, int bit_index,
                                                   std::optional<std::size_t> abort_above,
                                                   bool with_witness) {
    const auto& code_groups = codes_by_bit()[bit_index];

    BitSplitFsm fsm;
    fsm.bit_index = bit_index;
    fsm.pool_size = a.pool_size;

    std::unordered_map<std::vector<StateId>, StateId, StateSetHash> ids;
    std::vector<std::vector<StateId>> sets{{0}};
    ids.emplace(sets[0], 0);

    std::vector<StateId> scratch;
    for (std::size_t q = 0; q < sets.size(); ++q) {
        fsm.next.push_back({});
        for (int b = 0; b < 2; ++b) {
            scratch.clear();
            for (StateId s : sets[q])
                for (ResidueCode c : code_groups[b]) scratch.push_back(a.dfa_next[s][c]);
            std::sort(scratch.begin(), scratch.end());
            scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());

            auto [it, inserted] = ids.emplace(scratch, static_cast<StateId>(sets.size()));
            if (inserted) {
                sets.push_back(scratch);
                if (abort_above && sets.size() > *abort_above) return std::nullopt;
            }
            fsm.next[q][b] = it->second;
        }
    }

    if (with_witness) {
        fsm.pmv.reserve(sets.size());
        for (const auto& set : sets) {
            IdSet matched(a.pool_size);
            for (StateId s : set) matched |= a.output[s];
            fsm.pmv.push_back(std::move(matched));
        }
        fsm.state_sets = std::move(sets);
    }
    return fsm;
}

}  // namespace detail

inline BitSplitFsm build_bitsplit(const AcAutomaton& a, int bit_index) {
    if (!a.has_dfa()) throw std::logic_error("build_bitsplit needs a DFA-converted automaton");
    return *detail::subset_construct(a, bit_index, std::nullopt, true);
}

// The five bit machines of one tile, all derived from the same automaton.
struct TileMachines {
    std::array<BitSplitFsm, kResidueBits> fsms;
    IdSet peptide_ids;
};

inline TileMachines build_tile_machines(const PeptidePool& subset) {
    AcAutomaton a = build_automaton(subset);
    TileMachines tm;
    tm.peptide_ids = IdSet(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) tm.peptide_ids.set(i);
    for (int j = 0; j < kResidueBits; ++j) tm.fsms[j] = build_bitsplit(a, j);
    return tm;
}

// Lockstep match: feed bit j of each residue code to machine j and report the
// AND of the five partial match vectors whenever it is non-empty.
inline std::vector<MatchEvent> match_bitsplit(const TileMachines& tm, std::string_view text) {
    std::vector<MatchEvent> events;
    std::array<StateId, kResidueBits> states{};
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_canonical(text[i]))
            throw Error(Errc::invalid_residue,
                        "non-canonical residue '" + std::string(1, text[i]) + "' at position " +
                            std::to_string(i),
                        i);
        ResidueCode c = residue_code(text[i]);
        for (int j = 0; j < kResidueBits; ++j) states[j] = tm.fsms[j].next[states[j]][residue_bit(c, j)];

        IdSet hit = tm.fsms[0].pmv[states[0]];
        for (int j = 1; j < kResidueBits; ++j) hit &= tm.fsms[j].pmv[states[j]];
        if (hit.any()) events.push_back({i, std::move(hit)});
    }
    return events;
}

enum class CostMode { exact, trie };

inline const char* cost_mode_name(CostMode m) { return m == CostMode::exact ? "exact" : "trie"; }

struct CostReport {
    std::array<std::size_t, kResidueBits> per_machine{};
    std::size_t total = 0;

    bool operator==(const CostReport&) const = default;
};

namespace detail {

// Binary trie used for the node-count cost model; nodes are 1 root plus one
// per distinct bit-prefix.
class BitTrie {
public:
    BitTrie() : nodes_(1, {{-1, -1}}) {}

    std::size_t node_count() const { return nodes_.size(); }

    void insert(std::string_view bits) {
        std::int32_t cur = 0;
        for (char ch : bits) {
            int b = ch - '0';
            if (nodes_[cur].child[b] < 0) {
                nodes_[cur].child[b] = static_cast<std::int32_t>(nodes_.size());
                nodes_.push_back({{-1, -1}});
            }
            cur = nodes_[cur].child[b];
        }
    }

    // Nodes insert(bits) would add, without inserting.
    std::size_t probe(std::string_view bits) const {
        std::int32_t cur = 0;
        std::size_t matched = 0;
        for (char ch : bits) {
            std::int32_t next = nodes_[cur].child[ch - '0'];
            if (next < 0) break;
            cur = next;
            ++matched;
        }
        return bits.size() - matched;
    }

private:
    struct Node {
        std::array<std::int32_t, 2> child;
    };
    std::vector<Node> nodes_;
};

}  // namespace detail

// State-count report for a peptide set. exact = reachable states of the five
// subset-constructed machines; trie = node counts of the five binary tries
// over the peptides' bit streams.
inline CostReport state_cost(const PeptidePool& subset, CostMode mode) {
    if (subset.empty()) throw Error(Errc::empty_pool, "state_cost over an empty pool");

    CostReport report;
    if (mode == CostMode::exact) {
        AcAutomaton a = build_automaton(subset);
        for (int j = 0; j < kResidueBits; ++j)
            report.per_machine[j] = detail::subset_construct(a, j, std::nullopt, false)->state_count();
    } else {
        std::array<detail::BitTrie, kResidueBits> tries;
        for (const Peptide& p : subset.peptides()) {
            BitStreams bs = bit_split_strings(p.sequence);
            for (int j = 0; j < kResidueBits; ++j) tries[j].insert(bs.streams[j]);
        }
        for (int j = 0; j < kResidueBits; ++j) report.per_machine[j] = tries[j].node_count();
    }
    for (auto n : report.per_machine) report.total += n;
    return report;
}

}  // namespace pepfsm
