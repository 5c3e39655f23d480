#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pepfsm/errors.hpp"
#include "pepfsm/tilepack.hpp"

namespace pepfsm {

// Line-oriented plan document, fixed key order, LF endings. Re-serializing a
// parsed plan reproduces the input byte for byte.
inline std::string serialize_plan(const PackingPlan& plan) {
    std::ostringstream out;
    out << "pepfsm-plan v1\n";
    out << "strategy " << plan.strategy << "\n";
    out << "state-cap " << plan.config.state_cap << "\n";
    out << "cap-scope " << cap_scope_name(plan.config.cap_scope) << "\n";
    out << "cost-mode " << cost_mode_name(plan.config.cost_mode) << "\n";
    out << "max-peptides-per-tile ";
    if (plan.config.max_peptides_per_tile)
        out << *plan.config.max_peptides_per_tile;
    else
        out << "none";
    out << "\n";
    out << "seed-rule " << seed_rule_name(plan.config.seed_rule) << "\n";
    out << "seed " << plan.config.seed << "\n";
    out << "peptide-count " << plan.pool.size() << "\n";
    for (const Peptide& p : plan.pool.peptides()) out << "peptide " << p.id << " " << p.sequence << "\n";
    out << "tile-count " << plan.tiles.size() << "\n";
    for (const Tile& tile : plan.tiles) {
        out << "tile " << tile.index << " peptides ";
        for (std::size_t i = 0; i < tile.peptide_ids.size(); ++i)
            out << (i ? "," : "") << tile.peptide_ids[i];
        out << " states ";
        for (int j = 0; j < kResidueBits; ++j) out << (j ? "," : "") << tile.cost.per_machine[j];
        out << " total " << tile.cost.total << "\n";
    }
    out << "metrics tiles " << plan.metrics.tile_count << " total-states "
        << plan.metrics.total_states << " max-peptides-in-tile "
        << plan.metrics.max_peptides_in_tile << " min-peptides-in-tile "
        << plan.metrics.min_peptides_in_tile << "\n";
    out << "end\n";
    return out.str();
}

namespace detail {

class PlanReader {
public:
    explicit PlanReader(std::string_view text) : in_(std::string(text)) {}

    // Next line, which must start with `key` followed by a space (or be
    // exactly `key`); returns the remainder.
    std::string expect(const std::string& key) {
        std::string line;
        if (!std::getline(in_, line))
            throw Error(Errc::parse_error, "plan truncated, expected '" + key + "'");
        if (line == key) return "";
        if (line.rfind(key + " ", 0) != 0)
            throw Error(Errc::parse_error, "expected '" + key + "', got '" + line + "'");
        return line.substr(key.size() + 1);
    }

    static std::size_t to_number(std::string_view field, const std::string& what) {
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size())
            throw Error(Errc::parse_error, "bad " + what + " '" + std::string(field) + "'");
        return value;
    }

    static std::vector<std::string> split(std::string_view s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            std::size_t at = s.find(sep, start);
            parts.emplace_back(s.substr(start, at - start));
            if (at == std::string_view::npos) break;
            start = at + 1;
        }
        return parts;
    }

private:
    std::istringstream in_;
};

}  // namespace detail

// Parses a plan document and rebuilds every tile's machines from the recorded
// peptide sequences. State counts and metrics in the document are checked
// against re-measurement, so a tampered or stale plan fails loudly.
inline PackingPlan parse_plan(std::string_view text) {
    detail::PlanReader reader(text);
    PackingPlan plan;

    if (reader.expect("pepfsm-plan") != "v1")
        throw Error(Errc::parse_error, "unsupported plan version");
    plan.strategy = reader.expect("strategy");
    if (plan.strategy.empty()) throw Error(Errc::parse_error, "missing strategy name");
    plan.config.state_cap = detail::PlanReader::to_number(reader.expect("state-cap"), "state-cap");

    std::string scope = reader.expect("cap-scope");
    if (scope == "per-machine")
        plan.config.cap_scope = CapScope::per_machine;
    else if (scope == "aggregate")
        plan.config.cap_scope = CapScope::aggregate;
    else
        throw Error(Errc::parse_error, "bad cap-scope '" + scope + "'");

    std::string mode = reader.expect("cost-mode");
    if (mode == "exact")
        plan.config.cost_mode = CostMode::exact;
    else if (mode == "trie")
        plan.config.cost_mode = CostMode::trie;
    else
        throw Error(Errc::parse_error, "bad cost-mode '" + mode + "'");

    std::string max_pep = reader.expect("max-peptides-per-tile");
    if (max_pep == "none")
        plan.config.max_peptides_per_tile.reset();
    else
        plan.config.max_peptides_per_tile =
            detail::PlanReader::to_number(max_pep, "max-peptides-per-tile");

    std::string seed_rule = reader.expect("seed-rule");
    if (seed_rule == "lexicographic-first")
        plan.config.seed_rule = SeedRule::lexicographic_first;
    else if (seed_rule == "rng")
        plan.config.seed_rule = SeedRule::rng;
    else
        throw Error(Errc::parse_error, "bad seed-rule '" + seed_rule + "'");
    plan.config.seed = detail::PlanReader::to_number(reader.expect("seed"), "seed");

    std::size_t peptide_count =
        detail::PlanReader::to_number(reader.expect("peptide-count"), "peptide-count");
    std::vector<std::string> sequences;
    for (std::size_t i = 0; i < peptide_count; ++i) {
        std::string field = reader.expect("peptide");
        std::size_t space = field.find(' ');
        if (space == std::string::npos)
            throw Error(Errc::parse_error, "bad peptide line '" + field + "'");
        if (detail::PlanReader::to_number(field.substr(0, space), "peptide id") != i)
            throw Error(Errc::parse_error, "peptide ids must be dense and ordered");
        sequences.push_back(field.substr(space + 1));
    }
    plan.pool = build_pool(sequences);
    if (plan.pool.size() != peptide_count)
        throw Error(Errc::parse_error, "duplicate peptides in plan pool");

    std::size_t tile_count = detail::PlanReader::to_number(reader.expect("tile-count"), "tile-count");
    for (std::size_t k = 0; k < tile_count; ++k) {
        std::string field = reader.expect("tile");
        std::istringstream fields(field);
        std::string index_str, kw_peptides, ids_str, kw_states, states_str, kw_total, total_str;
        if (!(fields >> index_str >> kw_peptides >> ids_str >> kw_states >> states_str >> kw_total >>
              total_str) ||
            kw_peptides != "peptides" || kw_states != "states" || kw_total != "total")
            throw Error(Errc::parse_error, "bad tile line '" + field + "'");
        if (detail::PlanReader::to_number(index_str, "tile index") != k)
            throw Error(Errc::parse_error, "tile indices must be dense and ordered");

        Tile tile;
        tile.index = k;
        for (const std::string& id_str : detail::PlanReader::split(ids_str, ',')) {
            std::size_t id = detail::PlanReader::to_number(id_str, "peptide id");
            if (id >= plan.pool.size())
                throw Error(Errc::parse_error, "tile references unknown peptide " + id_str);
            tile.peptide_ids.push_back(static_cast<int>(id));
        }

        auto states = detail::PlanReader::split(states_str, ',');
        if (states.size() != kResidueBits)
            throw Error(Errc::parse_error, "expected 5 per-machine state counts");
        CostReport recorded;
        for (int j = 0; j < kResidueBits; ++j)
            recorded.per_machine[j] = detail::PlanReader::to_number(states[j], "state count");
        recorded.total = detail::PlanReader::to_number(total_str, "tile total");

        PeptidePool subset = plan.pool.subset(tile.peptide_ids);
        tile.cost = state_cost(subset, plan.config.cost_mode);
        if (!(tile.cost == recorded))
            throw Error(Errc::parse_error,
                        "tile " + std::to_string(k) + " state counts disagree with its peptides");
        tile.machines = build_tile_machines(subset);
        plan.metrics.total_states += tile.cost.total;
        plan.metrics.max_peptides_in_tile =
            std::max(plan.metrics.max_peptides_in_tile, tile.peptide_ids.size());
        plan.metrics.min_peptides_in_tile =
            plan.tiles.empty() ? tile.peptide_ids.size()
                               : std::min(plan.metrics.min_peptides_in_tile, tile.peptide_ids.size());
        plan.tiles.push_back(std::move(tile));
    }
    plan.metrics.tile_count = tile_count;

    std::istringstream metrics(reader.expect("metrics"));
    std::string kw_tiles, tiles_str, kw_total, total_str, kw_max, max_str, kw_min, min_str;
    if (!(metrics >> kw_tiles >> tiles_str >> kw_total >> total_str >> kw_max >> max_str >> kw_min >>
          min_str) ||
        kw_tiles != "tiles" || kw_total != "total-states" || kw_max != "max-peptides-in-tile" ||
        kw_min != "min-peptides-in-tile")
        throw Error(Errc::parse_error, "bad metrics line");
    if (detail::PlanReader::to_number(tiles_str, "metrics tiles") != plan.metrics.tile_count ||
        detail::PlanReader::to_number(total_str, "metrics total") != plan.metrics.total_states ||
        detail::PlanReader::to_number(max_str, "metrics max") != plan.metrics.max_peptides_in_tile ||
        detail::PlanReader::to_number(min_str, "metrics min") != plan.metrics.min_peptides_in_tile)
        throw Error(Errc::parse_error, "metrics line disagrees with tiles");
    reader.expect("end");

    std::string why;
    if (!validate_plan(plan, &why)) throw Error(Errc::parse_error, "invalid plan: " + why);
    return plan;
}

}  // namespace pepfsm
