#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "pepfsm/amino.hpp"
#include "pepfsm/errors.hpp"
#include "pepfsm/id_set.hpp"
#include "pepfsm/peptide.hpp"

namespace pepfsm {

using StateId = std::uint32_t;

struct MatchEvent {
    std::size_t end_position;  // 0-based index of the last matched residue
    IdSet peptide_ids;

    bool operator==(const MatchEvent&) const = default;
};

// Keyword automaton over the 20-letter residue alphabet. States are dense,
// root = 0, numbered in creation order as peptides are inserted. `trie_next`
// is the partial goto function (-1 = absent); `fail` and `dfa_next` are
// filled in by the later construction stages.
struct AcAutomaton {
    static constexpr std::int32_t kNoEdge = -1;

    std::vector<std::array<std::int32_t, kAlphabetSize>> trie_next;
    std::vector<StateId> parent;
    std::vector<ResidueCode> parent_code;
    std::vector<std::uint32_t> depth;
    std::vector<IdSet> output;
    std::vector<StateId> fail;
    std::vector<std::array<StateId, kAlphabetSize>> dfa_next;
    std::size_t pool_size = 0;

    std::size_t state_count() const { return trie_next.size(); }
    bool has_fail() const { return !fail.empty(); }
    bool has_dfa() const { return !dfa_next.empty(); }

    // States in breadth-first order from the root (fail links and DFA rows
    // are well-defined for a state once all shallower states are done).
    std::vector<StateId> bfs_order() const {
        std::vector<StateId> order;
        order.reserve(state_count());
        std::deque<StateId> queue{0};
        while (!queue.empty()) {
            StateId s = queue.front();
            queue.pop_front();
            order.push_back(s);
            for (int c = 0; c < kAlphabetSize; ++c)
                if (trie_next[s][c] != kNoEdge) queue.push_back(static_cast<StateId>(trie_next[s][c]));
        }
        return order;
    }

    // The prefix string a state represents; test/debug helper.
    std::string prefix_string(StateId s) const {
        std::string str;
        for (StateId cur = s; cur != 0; cur = parent[cur]) str.push_back(residue_letter(parent_code[cur]));
        return {str.rbegin(), str.rend()};
    }
};

inline AcAutomaton build_trie(const PeptidePool& pool) {
    if (pool.empty()) throw Error(Errc::empty_pool, "cannot build a trie from an empty pool");

    AcAutomaton a;
    a.pool_size = pool.size();
    auto add_state = [&a](StateId par, ResidueCode code, std::uint32_t d) {
        std::array<std::int32_t, kAlphabetSize> none;
        none.fill(AcAutomaton::kNoEdge);
        a.trie_next.push_back(none);
        a.parent.push_back(par);
        a.parent_code.push_back(code);
        a.depth.push_back(d);
        a.output.emplace_back(a.pool_size);
        return static_cast<StateId>(a.trie_next.size() - 1);
    };
    add_state(0, 0, 0);  // root

    for (const Peptide& p : pool.peptides()) {
        StateId s = 0;
        for (ResidueCode c : encode_sequence(p.sequence)) {
            std::int32_t next = a.trie_next[s][c];
            if (next == AcAutomaton::kNoEdge) {
                StateId fresh = add_state(s, c, a.depth[s] + 1);
                a.trie_next[s][c] = static_cast<std::int32_t>(fresh);
                s = fresh;
            } else {
                s = static_cast<StateId>(next);
            }
        }
        a.output[s].set(static_cast<std::size_t>(p.id));
    }
    return a;
}

// Standard BFS failure construction; outputs are merged along fail links so
// every state reports all patterns ending at its prefix.
inline void add_failure_links(AcAutomaton& a) {
    a.fail.assign(a.state_count(), 0);
    for (StateId s : a.bfs_order()) {
        if (s == 0) continue;
        if (a.depth[s] == 1) {
            a.fail[s] = 0;
        } else {
            StateId f = a.fail[a.parent[s]];
            ResidueCode c = a.parent_code[s];
            while (f != 0 && a.trie_next[f][c] == AcAutomaton::kNoEdge) f = a.fail[f];
            std::int32_t edge = a.trie_next[f][c];
            a.fail[s] = edge != AcAutomaton::kNoEdge ? static_cast<StateId>(edge) : 0;
        }
        a.output[s] |= a.output[a.fail[s]];
    }
}

// Failure elimination: dfa_next is total over all 20 codes.
inline void to_dfa(AcAutomaton& a) {
    a.dfa_next.assign(a.state_count(), {});
    for (StateId s : a.bfs_order()) {
        for (int c = 0; c < kAlphabetSize; ++c) {
            std::int32_t edge = a.trie_next[s][c];
            if (edge != AcAutomaton::kNoEdge)
                a.dfa_next[s][c] = static_cast<StateId>(edge);
            else
                a.dfa_next[s][c] = s == 0 ? 0 : a.dfa_next[a.fail[s]][c];
        }
    }
}

inline AcAutomaton build_automaton(const PeptidePool& pool) {
    AcAutomaton a = build_trie(pool);
    add_failure_links(a);
    to_dfa(a);
    return a;
}

// Single left-to-right pass; one event per position where at least one
// peptide ends, carrying the full id set.
inline std::vector<MatchEvent> match_stream(const AcAutomaton& a, std::string_view text) {
    if (!a.has_dfa()) throw std::logic_error("match_stream needs a DFA-converted automaton");
    std::vector<MatchEvent> events;
    StateId s = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_canonical(text[i]))
            throw Error(Errc::invalid_residue,
                        "non-canonical residue '" + std::string(1, text[i]) + "' at position " +
                            std::to_string(i),
                        i);
        s = a.dfa_next[s][residue_code(text[i])];
        if (a.output[s].any()) events.push_back({i, a.output[s]});
    }
    return events;
}

}  // namespace pepfsm
