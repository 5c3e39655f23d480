#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pepfsm/aho_corasick.hpp"
#include "pepfsm/bitsplit.hpp"
#include "pepfsm/tilepack.hpp"

namespace pepfsm {

// Cycle-level record of one tile run: the five machine states, their PMVs,
// and the AND result, one entry per consumed residue.
struct SimTrace {
    struct Cycle {
        std::array<StateId, kResidueBits> states;
        std::array<IdSet, kResidueBits> pmvs;
        IdSet and_result;
    };
    std::vector<Cycle> cycles;
};

// Hardware-faithful tile execution: one residue per cycle, all five machines
// stepped in lockstep, match = AND of the PMVs. Events use tile-local ids,
// exactly like match_bitsplit.
inline std::vector<MatchEvent> simulate_tile(const Tile& tile, std::string_view text,
                                             SimTrace* trace = nullptr) {
    const TileMachines& tm = tile.machines;
    std::vector<MatchEvent> events;
    std::array<StateId, kResidueBits> states{};
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!is_canonical(text[i]))
            throw Error(Errc::invalid_residue,
                        "non-canonical residue '" + std::string(1, text[i]) + "' at position " +
                            std::to_string(i),
                        i);
        ResidueCode c = residue_code(text[i]);
        for (int j = 0; j < kResidueBits; ++j)
            states[j] = tm.fsms[j].next[states[j]][residue_bit(c, j)];

        IdSet hit = tm.fsms[0].pmv[states[0]];
        for (int j = 1; j < kResidueBits; ++j) hit &= tm.fsms[j].pmv[states[j]];

        if (trace) {
            SimTrace::Cycle cycle;
            cycle.states = states;
            for (int j = 0; j < kResidueBits; ++j) cycle.pmvs[j] = tm.fsms[j].pmv[states[j]];
            cycle.and_result = hit;
            trace->cycles.push_back(std::move(cycle));
        }
        if (hit.any()) events.push_back({i, std::move(hit)});
    }
    return events;
}

// Debug dump for checking generated VHDL against a logic simulator.
inline std::string trace_to_csv(const SimTrace& trace) {
    std::ostringstream c;
    c << "cycle,state0,state1,state2,state3,state4,pmv0,pmv1,pmv2,pmv3,pmv4,and_result\n";
    for (std::size_t i = 0; i < trace.cycles.size(); ++i) {
        const auto& cy = trace.cycles[i];
        c << i;
        for (int j = 0; j < kResidueBits; ++j) c << "," << cy.states[j];
        for (int j = 0; j < kResidueBits; ++j) c << "," << cy.pmvs[j].to_hex();
        c << "," << cy.and_result.to_hex() << "\n";
    }
    return c.str();
}

// All tiles run side by side; per-tile events are remapped to pool-wide
// peptide ids, merged, and sorted by end position. `tile_of` (optional)
// receives the owning tile index per event.
inline std::vector<MatchEvent> simulate_plan(const PackingPlan& plan, std::string_view text,
                                             std::vector<std::size_t>* tile_of = nullptr) {
    struct Attributed {
        MatchEvent event;
        std::size_t tile;
        std::size_t min_id;
    };
    std::vector<Attributed> all;
    for (const Tile& tile : plan.tiles) {
        for (MatchEvent& local : simulate_tile(tile, text)) {
            IdSet global(plan.pool.size());
            std::size_t min_id = plan.pool.size();
            for (std::size_t i : local.peptide_ids.to_indices()) {
                std::size_t id = static_cast<std::size_t>(tile.peptide_ids[i]);
                global.set(id);
                min_id = std::min(min_id, id);
            }
            all.push_back({{local.end_position, std::move(global)}, tile.index, min_id});
        }
    }
    // Tiles partition the pool, so same-position events from different tiles
    // carry disjoint id sets; (end_position, smallest id) is a total order
    // independent of tile order.
    std::sort(all.begin(), all.end(), [](const Attributed& a, const Attributed& b) {
        return a.event.end_position != b.event.end_position
                   ? a.event.end_position < b.event.end_position
                   : a.min_id < b.min_id;
    });
    std::vector<MatchEvent> events;
    if (tile_of) tile_of->clear();
    for (auto& entry : all) {
        events.push_back(std::move(entry.event));
        if (tile_of) tile_of->push_back(entry.tile);
    }
    return events;
}

struct VerificationReport {
    struct Divergence {
        std::size_t text_index = 0;
        std::size_t end_position = 0;
        std::string detail;
    };
    struct Entry {
        std::string label;
        bool pass = false;
    };

    std::vector<Entry> entries;
    std::size_t checks = 0;
    bool all_pass = true;  // vacuously true with zero checks
    std::optional<Divergence> first_divergence;
};

namespace detail {

// Distinct (end, ids) comparison of two event lists, merging plan events that
// share an end position so tiling does not affect the comparison.
inline std::optional<std::pair<std::size_t, std::string>> first_event_divergence(
    const std::vector<MatchEvent>& expected, std::vector<MatchEvent> actual,
    std::size_t pool_size) {
    std::vector<MatchEvent> merged;
    for (MatchEvent& e : actual) {
        if (!merged.empty() && merged.back().end_position == e.end_position)
            merged.back().peptide_ids |= e.peptide_ids;
        else
            merged.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < expected.size() || i < merged.size(); ++i) {
        if (i >= expected.size())
            return std::make_pair(merged[i].end_position, std::string("unexpected match event"));
        if (i >= merged.size())
            return std::make_pair(expected[i].end_position, std::string("missing match event"));
        if (expected[i].end_position != merged[i].end_position)
            return std::make_pair(merged[i].end_position, std::string("event position mismatch"));
        if (!(expected[i].peptide_ids == merged[i].peptide_ids)) {
            IdSet want = expected[i].peptide_ids, got = merged[i].peptide_ids;
            std::string detail = "peptide id sets differ (expected " + want.to_hex() + ", got " +
                                 got.to_hex() + ")";
            return std::make_pair(expected[i].end_position, detail);
        }
    }
    (void)pool_size;
    return std::nullopt;
}

}  // namespace detail

// Full-system check: the packed, bit-split tiles must reproduce the reference
// matcher over the whole pool on every text.
inline VerificationReport verify(const PackingPlan& plan, const std::vector<std::string>& texts) {
    VerificationReport report;
    std::optional<AcAutomaton> reference;
    if (!plan.pool.empty() && !texts.empty()) reference = build_automaton(plan.pool);

    for (std::size_t t = 0; t < texts.size(); ++t) {
        std::string label = "text " + std::to_string(t) + " (" + std::to_string(texts[t].size()) +
                            " residues)";
        std::vector<MatchEvent> expected =
            reference ? match_stream(*reference, texts[t]) : std::vector<MatchEvent>{};
        auto divergence = detail::first_event_divergence(expected, simulate_plan(plan, texts[t]),
                                                         plan.pool.size());
        bool pass = !divergence;
        if (!pass && !report.first_divergence)
            report.first_divergence =
                VerificationReport::Divergence{t, divergence->first, divergence->second};
        report.entries.push_back({std::move(label), pass});
        report.all_pass = report.all_pass && pass;
        ++report.checks;
    }
    return report;
}

inline std::string render_report(const VerificationReport& report) {
    std::ostringstream out;
    for (const auto& entry : report.entries)
        out << (entry.pass ? "pass" : "FAIL") << "  " << entry.label << "\n";
    out << (report.all_pass ? "verified" : "verification FAILED") << ": " << report.checks
        << " check(s)\n";
    if (report.first_divergence)
        out << "first divergence: text " << report.first_divergence->text_index << ", end position "
            << report.first_divergence->end_position << ": " << report.first_divergence->detail
            << "\n";
    return out.str();
}

}  // namespace pepfsm
