#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pepfsm/aho_corasick.hpp"
#include "pepfsm/bitsplit.hpp"
#include "pepfsm/tilepack.hpp"

namespace pepfsm {

struct VhdlUnit {
    std::string file_name;  // entity name + ".vhd"
    std::string source;
};

namespace detail {

inline std::size_t state_register_bits(std::size_t state_count) {
    std::size_t bits = 1;
    while ((std::size_t{1} << bits) < state_count) ++bits;
    return bits < 8 ? 8 : bits;  // 8-bit registers up to the 256-state tile cap
}

inline std::string pmv_literal(const IdSet& pmv) {
    std::string bits(pmv.universe(), '0');
    for (std::size_t i = 0; i < pmv.universe(); ++i)
        if (pmv.test(i)) bits[pmv.universe() - 1 - i] = '1';  // MSB first: peptide 0 is bit 0
    return "\"" + bits + "\"";
}

inline std::string vhdl_bit_machine(const std::string& entity, const BitSplitFsm& fsm) {
    std::size_t bits = state_register_bits(fsm.state_count());
    std::string reg = std::to_string(bits);
    std::ostringstream v;
    v << "-- " << entity << ".vhd\n";
    v << "-- Bit-split pattern matcher for bit " << fsm.bit_index
      << " (MSB first) of the 5-bit residue code.\n";
    v << "library ieee;\n";
    v << "use ieee.std_logic_1164.all;\n";
    v << "use ieee.numeric_std.all;\n";
    v << "\n";
    v << "entity " << entity << " is\n";
    v << "  port (\n";
    v << "    clk   : in  std_logic;\n";
    v << "    reset : in  std_logic;\n";
    v << "    din   : in  std_logic;\n";
    v << "    pmv   : out std_logic_vector(" << fsm.pool_size - 1 << " downto 0)\n";
    v << "  );\n";
    v << "end entity " << entity << ";\n";
    v << "\n";
    v << "architecture rtl of " << entity << " is\n";
    v << "  signal state : unsigned(" << bits - 1 << " downto 0) := (others => '0');\n";
    v << "begin\n";
    v << "\n";
    v << "  step : process (clk)\n";
    v << "  begin\n";
    v << "    if rising_edge(clk) then\n";
    v << "      if reset = '1' then\n";
    v << "        state <= to_unsigned(0, " << reg << ");\n";
    v << "      else\n";
    v << "        case to_integer(state) is\n";
    for (std::size_t s = 0; s < fsm.state_count(); ++s) {
        v << "          when " << s << " =>\n";
        v << "            if din = '1' then\n";
        v << "              state <= to_unsigned(" << fsm.next[s][1] << ", " << reg << ");\n";
        v << "            else\n";
        v << "              state <= to_unsigned(" << fsm.next[s][0] << ", " << reg << ");\n";
        v << "            end if;\n";
    }
    v << "          when others =>\n";
    v << "            state <= to_unsigned(0, " << reg << ");\n";
    v << "        end case;\n";
    v << "      end if;\n";
    v << "    end if;\n";
    v << "  end process step;\n";
    v << "\n";
    v << "  with to_integer(state) select pmv <=\n";
    for (std::size_t s = 0; s < fsm.state_count(); ++s) {
        if (fsm.pmv[s].none()) continue;
        v << "    " << pmv_literal(fsm.pmv[s]) << " when " << s << ",\n";
    }
    v << "    \"" << std::string(fsm.pool_size, '0') << "\" when others;\n";
    v << "\n";
    v << "end architecture rtl;\n";
    return v.str();
}

inline std::string vhdl_component_decl(const std::string& entity, std::size_t pmv_width) {
    std::ostringstream v;
    v << "  component " << entity << " is\n";
    v << "    port (\n";
    v << "      clk   : in  std_logic;\n";
    v << "      reset : in  std_logic;\n";
    v << "      din   : in  std_logic;\n";
    v << "      pmv   : out std_logic_vector(" << pmv_width - 1 << " downto 0)\n";
    v << "    );\n";
    v << "  end component;\n";
    return v.str();
}

inline std::string vhdl_tile_top(const std::string& entity, const std::string& stem,
                                 std::size_t pmv_width) {
    std::ostringstream v;
    v << "-- " << entity << ".vhd\n";
    v << "-- Tile wrapper: five bit-split machines in lockstep; a match is the AND\n";
    v << "-- of their partial match vectors.\n";
    v << "library ieee;\n";
    v << "use ieee.std_logic_1164.all;\n";
    v << "\n";
    v << "entity " << entity << " is\n";
    v << "  port (\n";
    v << "    clk     : in  std_logic;\n";
    v << "    reset   : in  std_logic;\n";
    v << "    residue : in  std_logic_vector(4 downto 0);\n";
    v << "    match   : out std_logic_vector(" << pmv_width - 1 << " downto 0)\n";
    v << "  );\n";
    v << "end entity " << entity << ";\n";
    v << "\n";
    v << "architecture rtl of " << entity << " is\n";
    for (int j = 0; j < kResidueBits; ++j)
        v << vhdl_component_decl(stem + "_bit" + std::to_string(j), pmv_width);
    for (int j = 0; j < kResidueBits; ++j)
        v << "  signal pmv" << j << " : std_logic_vector(" << pmv_width - 1 << " downto 0);\n";
    v << "begin\n";
    v << "\n";
    for (int j = 0; j < kResidueBits; ++j) {
        // machine j consumes bit j (MSB first): residue(4 - j)
        v << "  u_bit" << j << " : " << stem << "_bit" << j
          << " port map (clk => clk, reset => reset, din => residue(" << kResidueBits - 1 - j
          << "), pmv => pmv" << j << ");\n";
    }
    v << "\n";
    v << "  match <= pmv0 and pmv1 and pmv2 and pmv3 and pmv4;\n";
    v << "\n";
    v << "end architecture rtl;\n";
    return v.str();
}

}  // namespace detail

// One synthesizable unit per bit-split machine plus the tile wrapper.
inline std::vector<VhdlUnit> emit_vhdl(const Tile& tile) {
    std::string stem = "tile" + std::to_string(tile.index);
    std::vector<VhdlUnit> units;
    for (int j = 0; j < kResidueBits; ++j) {
        std::string entity = stem + "_bit" + std::to_string(j);
        units.push_back({entity + ".vhd", detail::vhdl_bit_machine(entity, tile.machines.fsms[j])});
    }
    std::string top = stem + "_top";
    units.push_back(
        {top + ".vhd", detail::vhdl_tile_top(top, stem, tile.machines.peptide_ids.universe())});
    return units;
}

// Tile units for every tile; plans with two or more tiles also get a
// matcher_top that maps each tile's local match bus onto the pool-wide one.
inline std::vector<VhdlUnit> emit_vhdl_plan(const PackingPlan& plan) {
    std::vector<VhdlUnit> units;
    for (const Tile& tile : plan.tiles) {
        auto tile_units = emit_vhdl(tile);
        units.insert(units.end(), tile_units.begin(), tile_units.end());
    }
    if (plan.tiles.size() < 2) return units;

    std::ostringstream v;
    v << "-- matcher_top.vhd\n";
    v << "-- Full matcher: all tiles scan the residue stream side by side.\n";
    v << "library ieee;\n";
    v << "use ieee.std_logic_1164.all;\n";
    v << "\n";
    v << "entity matcher_top is\n";
    v << "  port (\n";
    v << "    clk     : in  std_logic;\n";
    v << "    reset   : in  std_logic;\n";
    v << "    residue : in  std_logic_vector(4 downto 0);\n";
    v << "    match   : out std_logic_vector(" << plan.pool.size() - 1 << " downto 0)\n";
    v << "  );\n";
    v << "end entity matcher_top;\n";
    v << "\n";
    v << "architecture rtl of matcher_top is\n";
    for (const Tile& tile : plan.tiles) {
        std::string entity = "tile" + std::to_string(tile.index) + "_top";
        v << "  component " << entity << " is\n";
        v << "    port (\n";
        v << "      clk     : in  std_logic;\n";
        v << "      reset   : in  std_logic;\n";
        v << "      residue : in  std_logic_vector(4 downto 0);\n";
        v << "      match   : out std_logic_vector(" << tile.peptide_ids.size() - 1
          << " downto 0)\n";
        v << "    );\n";
        v << "  end component;\n";
    }
    for (const Tile& tile : plan.tiles)
        v << "  signal tile" << tile.index << "_match : std_logic_vector("
          << tile.peptide_ids.size() - 1 << " downto 0);\n";
    v << "begin\n";
    v << "\n";
    for (const Tile& tile : plan.tiles)
        v << "  u_tile" << tile.index << " : tile" << tile.index
          << "_top port map (clk => clk, reset => reset, residue => residue, match => tile"
          << tile.index << "_match);\n";
    v << "\n";
    for (const Tile& tile : plan.tiles)
        for (std::size_t local = 0; local < tile.peptide_ids.size(); ++local)
            v << "  match(" << tile.peptide_ids[local] << ") <= tile" << tile.index << "_match("
              << local << ");\n";
    v << "\n";
    v << "end architecture rtl;\n";
    units.push_back({"matcher_top.vhd", v.str()});
    return units;
}

// Graphviz text: one node per state (start marked, accepting states double
// circled), one edge per transition.
inline std::string emit_dot(const BitSplitFsm& fsm, const std::string& name) {
    std::ostringstream d;
    d << "digraph " << name << " {\n";
    d << "  rankdir=LR;\n";
    d << "  __start [shape=point];\n";
    d << "  __start -> 0;\n";
    for (std::size_t s = 0; s < fsm.state_count(); ++s)
        d << "  " << s << " [shape=" << (fsm.pmv[s].any() ? "doublecircle" : "circle") << "];\n";
    for (std::size_t s = 0; s < fsm.state_count(); ++s)
        for (int b = 0; b < 2; ++b)
            d << "  " << s << " -> " << fsm.next[s][b] << " [label=\"" << b << "\"];\n";
    d << "}\n";
    return d.str();
}

inline std::string emit_dot(const AcAutomaton& a, const std::string& name) {
    std::ostringstream d;
    d << "digraph " << name << " {\n";
    d << "  rankdir=LR;\n";
    d << "  __start [shape=point];\n";
    d << "  __start -> 0;\n";
    for (std::size_t s = 0; s < a.state_count(); ++s)
        d << "  " << s << " [shape=" << (a.output[s].any() ? "doublecircle" : "circle") << "];\n";
    for (std::size_t s = 0; s < a.state_count(); ++s)
        for (int c = 0; c < kAlphabetSize; ++c)
            if (a.trie_next[s][c] != AcAutomaton::kNoEdge)
                d << "  " << s << " -> " << a.trie_next[s][c] << " [label=\""
                  << residue_letter(static_cast<ResidueCode>(c)) << "\"];\n";
    d << "}\n";
    return d.str();
}

// Transition tables as CSV: one row per state in index order. Bit-split
// tables carry the PMV as a hex bitmask column.
inline std::string emit_table_csv(const BitSplitFsm& fsm) {
    std::ostringstream c;
    c << "state,0,1,pmv\n";
    for (std::size_t s = 0; s < fsm.state_count(); ++s)
        c << s << "," << fsm.next[s][0] << "," << fsm.next[s][1] << "," << fsm.pmv[s].to_hex()
          << "\n";
    return c.str();
}

inline std::string emit_table_csv(const AcAutomaton& a) {
    if (!a.has_dfa()) throw std::logic_error("emit_table_csv needs a DFA-converted automaton");
    std::ostringstream c;
    c << "state";
    for (int i = 0; i < kAlphabetSize; ++i) c << "," << residue_letter(static_cast<ResidueCode>(i));
    c << "\n";
    for (std::size_t s = 0; s < a.state_count(); ++s) {
        c << s;
        for (int i = 0; i < kAlphabetSize; ++i) c << "," << a.dfa_next[s][i];
        c << "\n";
    }
    return c.str();
}

// Percentages are printed the way the comparison tables print them: one
// decimal, truncated.
inline long long percent_tenths(long long numerator, long long denominator) {
    if (denominator == 0) return 0;
    return numerator * 1000 / denominator;
}

inline std::string format_percent_tenths(long long tenths) {
    std::string sign = tenths < 0 ? "-" : "";
    if (tenths < 0) tenths = -tenths;
    return sign + std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
}

// Tile increment of an ordering over a baseline: (a - b) / a.
inline std::string format_tile_increment(std::size_t baseline_tiles, std::size_t ordered_tiles) {
    return format_percent_tenths(percent_tenths(
        static_cast<long long>(baseline_tiles) - static_cast<long long>(ordered_tiles),
        static_cast<long long>(baseline_tiles)));
}

// Peptide increment under a fixed state budget: (b - a) / a.
inline std::string format_peptide_increment(std::size_t baseline_peptides,
                                            std::size_t ordered_peptides) {
    return format_percent_tenths(percent_tenths(
        static_cast<long long>(ordered_peptides) - static_cast<long long>(baseline_peptides),
        static_cast<long long>(baseline_peptides)));
}

struct ReportDocs {
    std::string text;
    std::string csv;
};

inline ReportDocs emit_report(const ComparisonReport& report) {
    std::ostringstream t, c;

    t << "packing comparison\n";
    t << "\n";
    t << "strategy      tiles  total-states  min/tile  max/tile\n";
    c << "record,strategy,tiles,total_states,min_peptides_per_tile,max_peptides_per_tile\n";
    for (const auto& row : report.rows) {
        std::ostringstream line;
        line << row.strategy;
        for (std::size_t pad = line.str().size(); pad < 12; ++pad) line << ' ';
        t << line.str();
        auto field = [&t](std::size_t value, int width) {
            std::string s = std::to_string(value);
            for (int pad = static_cast<int>(s.size()); pad < width; ++pad) t << ' ';
            t << s;
        };
        field(row.tile_count, 7);
        field(row.total_states, 14);
        field(row.min_peptides, 10);
        field(row.max_peptides, 10);
        t << "\n";
        c << "plan," << row.strategy << "," << row.tile_count << "," << row.total_states << ","
          << row.min_peptides << "," << row.max_peptides << "\n";
    }

    if (!report.increments.empty()) {
        t << "\n";
        t << "tile increment ((a - b) / a)\n";
        c << "record,from,to,from_tiles,to_tiles,tile_increment\n";
        for (const auto& inc : report.increments) {
            std::string pct = format_tile_increment(inc.from_tiles, inc.to_tiles);
            t << inc.from << " vs " << inc.to << ": " << pct << "\n";
            c << "increment," << inc.from << "," << inc.to << "," << inc.from_tiles << ","
              << inc.to_tiles << "," << pct << "\n";
        }
    }

    if (!report.budget_rows.empty()) {
        t << "\n";
        t << "peptides admitted per state budget (single uncapped tile)\n";
        c << "record,budget,strategy,admitted,peptide_increment\n";
        for (const auto& budget_row : report.budget_rows) {
            t << "state-budget " << budget_row.budget << "\n";
            std::size_t baseline = budget_row.admitted.empty() ? 0 : budget_row.admitted[0];
            for (std::size_t i = 0; i < budget_row.admitted.size(); ++i) {
                std::string pct = format_peptide_increment(baseline, budget_row.admitted[i]);
                t << "  " << report.rows[i].strategy << " " << budget_row.admitted[i];
                if (i > 0) t << " (" << pct << " vs " << report.rows[0].strategy << ")";
                t << "\n";
                c << "budget," << budget_row.budget << "," << report.rows[i].strategy << ","
                  << budget_row.admitted[i] << "," << pct << "\n";
            }
        }
    }
    return {t.str(), c.str()};
}

}  // namespace pepfsm
