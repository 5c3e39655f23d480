#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pepfsm/bitsplit.hpp"
#include "pepfsm/errors.hpp"
#include "pepfsm/peptide.hpp"

namespace pepfsm {

enum class CapScope { per_machine, aggregate };
enum class SeedRule { lexicographic_first, rng };

inline const char* cap_scope_name(CapScope s) {
    return s == CapScope::per_machine ? "per-machine" : "aggregate";
}
inline const char* seed_rule_name(SeedRule r) {
    return r == SeedRule::lexicographic_first ? "lexicographic-first" : "rng";
}

struct PackConfig {
    std::size_t state_cap = 256;
    CapScope cap_scope = CapScope::per_machine;
    std::optional<std::size_t> max_peptides_per_tile;
    CostMode cost_mode = CostMode::exact;
    SeedRule seed_rule = SeedRule::lexicographic_first;
    std::uint64_t seed = 0;

    bool operator==(const PackConfig&) const = default;
};

struct Tile {
    std::size_t index = 0;
    std::vector<int> peptide_ids;  // global ids, insertion order
    TileMachines machines;         // over the local subset, ids 0..k-1 in that order
    CostReport cost;
};

struct PlanMetrics {
    std::size_t tile_count = 0;
    std::size_t total_states = 0;
    std::size_t max_peptides_in_tile = 0;
    std::size_t min_peptides_in_tile = 0;

    bool operator==(const PlanMetrics&) const = default;
};

struct PackingPlan {
    std::string strategy;
    PackConfig config;
    PeptidePool pool;
    std::vector<Tile> tiles;
    PlanMetrics metrics;
};

namespace detail {

// Bit streams of every pool peptide, computed once per packing run; the
// probe loops hit these thousands of times.
using StreamTable = std::vector<BitStreams>;

inline StreamTable all_bit_streams(const PeptidePool& pool) {
    StreamTable streams;
    streams.reserve(pool.size());
    for (const Peptide& p : pool.peptides()) streams.push_back(bit_split_strings(p.sequence));
    return streams;
}

// Incremental cost state of one tile under construction. probe() answers
// "would this peptide fit, and at what marginal state cost" without mutating;
// exact mode rebuilds from scratch (aborting once past the cap), trie mode
// walks the five running tries.
class TileCostTracker {
public:
    TileCostTracker(const PeptidePool& pool, const PackConfig& cfg, const StreamTable& streams)
        : pool_(&pool), cfg_(&cfg), streams_(&streams) {}

    struct ProbeResult {
        CostReport after;
        std::size_t delta;  // after.total - current total
    };

    const std::vector<int>& ids() const { return ids_; }
    bool empty() const { return ids_.empty(); }
    const CostReport& cost() const { return cost_; }

    std::optional<ProbeResult> probe(int candidate) const {
        if (cfg_->max_peptides_per_tile && ids_.size() >= *cfg_->max_peptides_per_tile)
            return std::nullopt;

        CostReport after;
        if (cfg_->cost_mode == CostMode::trie) {
            const BitStreams& bs = (*streams_)[candidate];
            for (int j = 0; j < kResidueBits; ++j)
                after.per_machine[j] = tries_[j].node_count() + tries_[j].probe(bs.streams[j]);
            for (auto n : after.per_machine) after.total += n;
            if (!within_cap(after)) return std::nullopt;
        } else {
            std::vector<int> ids = ids_;
            ids.push_back(candidate);
            AcAutomaton a = build_automaton(pool_->subset(ids));
            for (int j = 0; j < kResidueBits; ++j) {
                auto fsm = subset_construct(a, j, cfg_->state_cap, false);
                if (!fsm) return std::nullopt;  // exceeding the cap in any one machine
                after.per_machine[j] = fsm->state_count();
                after.total += after.per_machine[j];
            }
            if (!within_cap(after)) return std::nullopt;
        }
        return ProbeResult{after, after.total - cost_.total};
    }

    void add(int id, const CostReport& probed_after) {
        ids_.push_back(id);
        cost_ = probed_after;
        if (cfg_->cost_mode == CostMode::trie)
            for (int j = 0; j < kResidueBits; ++j) tries_[j].insert((*streams_)[id].streams[j]);
    }

private:
    bool within_cap(const CostReport& r) const {
        if (cfg_->cap_scope == CapScope::aggregate) return r.total <= cfg_->state_cap;
        for (auto n : r.per_machine)
            if (n > cfg_->state_cap) return false;
        return true;
    }

    const PeptidePool* pool_;
    const PackConfig* cfg_;
    const StreamTable* streams_;
    std::vector<int> ids_;
    CostReport cost_;
    std::array<BitTrie, kResidueBits> tries_;
};

struct TileIds {
    std::vector<int> ids;
    CostReport cost;
};

[[noreturn]] inline void throw_exceeds_cap(const PeptidePool& pool, int id) {
    throw Error(Errc::single_peptide_exceeds_cap,
                "peptide " + std::to_string(id) + " ('" + pool.sequence(id) +
                    "') alone exceeds the state cap",
                Error::npos, id);
}

// List-order filling: close the tile as soon as the next peptide misfits.
inline std::vector<TileIds> sequential_partition(const PeptidePool& pool,
                                                 const std::vector<int>& order,
                                                 const PackConfig& cfg,
                                                 const StreamTable& streams) {
    std::vector<TileIds> tiles;
    TileCostTracker tracker(pool, cfg, streams);
    for (int id : order) {
        if (auto p = tracker.probe(id)) {
            tracker.add(id, p->after);
            continue;
        }
        if (tracker.empty()) throw_exceeds_cap(pool, id);
        tiles.push_back({tracker.ids(), tracker.cost()});
        tracker = TileCostTracker(pool, cfg, streams);
        auto p = tracker.probe(id);
        if (!p) throw_exceeds_cap(pool, id);
        tracker.add(id, p->after);
    }
    if (!tracker.empty()) tiles.push_back({tracker.ids(), tracker.cost()});
    return tiles;
}

// Like sequential, but on a misfit scan forward for the first peptide that
// still fits; the tile closes only when nothing remaining fits.
inline std::vector<TileIds> fit_scan_partition(const PeptidePool& pool,
                                               const std::vector<int>& order,
                                               const PackConfig& cfg,
                                               const StreamTable& streams) {
    std::vector<TileIds> tiles;
    std::vector<int> remaining = order;
    TileCostTracker tracker(pool, cfg, streams);
    while (!remaining.empty()) {
        bool added = false;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            if (auto p = tracker.probe(remaining[i])) {
                tracker.add(remaining[i], p->after);
                remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
                added = true;
                break;
            }
        }
        if (added) continue;
        if (tracker.empty()) throw_exceeds_cap(pool, remaining.front());
        tiles.push_back({tracker.ids(), tracker.cost()});
        tracker = TileCostTracker(pool, cfg, streams);
    }
    if (!tracker.empty()) tiles.push_back({tracker.ids(), tracker.cost()});
    return tiles;
}

// One greedy tile: seed per the seed rule, then repeatedly add the remaining
// peptide with the minimum marginal cost (ties to the lexicographically
// smaller sequence). Selected ids are erased from `remaining`.
inline TileIds greedy_tile_ids(const PeptidePool& pool, std::vector<int>& remaining,
                               const PackConfig& cfg, const StreamTable& streams,
                               std::mt19937_64& rng) {
    auto take = [&remaining](std::size_t at) {
        int id = remaining[at];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(at));
        return id;
    };

    std::size_t seed_at = 0;
    if (cfg.seed_rule == SeedRule::rng) {
        seed_at = static_cast<std::size_t>(rng() % remaining.size());
    } else {
        for (std::size_t i = 1; i < remaining.size(); ++i)
            if (pool.sequence(remaining[i]) < pool.sequence(remaining[seed_at])) seed_at = i;
    }

    TileCostTracker tracker(pool, cfg, streams);
    int seed_id = take(seed_at);
    auto seeded = tracker.probe(seed_id);
    if (!seeded) throw_exceeds_cap(pool, seed_id);
    tracker.add(seed_id, seeded->after);

    while (!remaining.empty()) {
        std::optional<std::size_t> best_at;
        std::size_t best_delta = 0;
        CostReport best_after;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            auto p = tracker.probe(remaining[i]);
            if (!p) continue;
            bool better =
                !best_at || p->delta < best_delta ||
                (p->delta == best_delta &&
                 pool.sequence(remaining[i]) < pool.sequence(remaining[*best_at]));
            if (better) {
                best_at = i;
                best_delta = p->delta;
                best_after = p->after;
            }
        }
        if (!best_at) break;  // nothing fits
        tracker.add(take(*best_at), best_after);
    }
    return {tracker.ids(), tracker.cost()};
}

inline PackingPlan make_plan(const PeptidePool& pool, std::vector<TileIds> partition,
                             const PackConfig& cfg, std::string strategy) {
    PackingPlan plan;
    plan.strategy = std::move(strategy);
    plan.config = cfg;
    plan.pool = pool;
    plan.metrics.tile_count = partition.size();
    plan.metrics.min_peptides_in_tile =
        partition.empty() ? 0 : std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < partition.size(); ++k) {
        Tile tile;
        tile.index = k;
        tile.peptide_ids = std::move(partition[k].ids);
        tile.machines = build_tile_machines(pool.subset(tile.peptide_ids));
        tile.cost = partition[k].cost;
        plan.metrics.total_states += tile.cost.total;
        plan.metrics.max_peptides_in_tile =
            std::max(plan.metrics.max_peptides_in_tile, tile.peptide_ids.size());
        plan.metrics.min_peptides_in_tile =
            std::min(plan.metrics.min_peptides_in_tile, tile.peptide_ids.size());
        plan.tiles.push_back(std::move(tile));
    }
    return plan;
}

}  // namespace detail

inline std::vector<int> order_alphabetical(const PeptidePool& pool) {
    std::vector<int> ids(pool.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    std::sort(ids.begin(), ids.end(),
              [&pool](int a, int b) { return pool.sequence(a) < pool.sequence(b); });
    return ids;
}

inline PackingPlan pack_sequential(const PeptidePool& pool, const std::vector<int>& order,
                                   const PackConfig& cfg) {
    detail::StreamTable streams = detail::all_bit_streams(pool);
    return detail::make_plan(pool, detail::sequential_partition(pool, order, cfg, streams), cfg,
                             "sequential");
}

inline PackingPlan pack_sequential(const PeptidePool& pool, const PackConfig& cfg) {
    return pack_sequential(pool, order_alphabetical(pool), cfg);
}

inline PackingPlan pack_fit_scan(const PeptidePool& pool, const std::vector<int>& order,
                                 const PackConfig& cfg) {
    detail::StreamTable streams = detail::all_bit_streams(pool);
    return detail::make_plan(pool, detail::fit_scan_partition(pool, order, cfg, streams), cfg,
                             "fit-scan");
}

inline PackingPlan pack_fit_scan(const PeptidePool& pool, const PackConfig& cfg) {
    return pack_fit_scan(pool, order_alphabetical(pool), cfg);
}

// One minimum-marginal-state tile over `remaining`; chosen ids are removed.
inline Tile greedy_order_tile(const PeptidePool& pool, std::vector<int>& remaining,
                              const PackConfig& cfg, std::size_t tile_index = 0) {
    if (remaining.empty()) throw Error(Errc::empty_pool, "greedy_order_tile over an empty pool");
    std::mt19937_64 rng(cfg.seed);
    detail::StreamTable streams = detail::all_bit_streams(pool);
    detail::TileIds chosen = detail::greedy_tile_ids(pool, remaining, cfg, streams, rng);
    Tile tile;
    tile.index = tile_index;
    tile.peptide_ids = std::move(chosen.ids);
    tile.machines = build_tile_machines(pool.subset(tile.peptide_ids));
    tile.cost = chosen.cost;
    return tile;
}

inline PackingPlan pack_greedy(const PeptidePool& pool, const PackConfig& cfg) {
    std::vector<int> remaining(pool.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<int>(i);
    std::mt19937_64 rng(cfg.seed);
    detail::StreamTable streams = detail::all_bit_streams(pool);

    std::vector<detail::TileIds> partition;
    while (!remaining.empty())
        partition.push_back(detail::greedy_tile_ids(pool, remaining, cfg, streams, rng));
    return detail::make_plan(pool, std::move(partition), cfg, "greedy");
}

inline constexpr std::size_t kExhaustivePoolLimit = 8;

// Factorial oracle: the best sequential packing over all peptide orderings,
// minimizing tile count then total states; ties resolve to the
// lexicographically smallest ordering.
inline PackingPlan pack_exhaustive(const PeptidePool& pool, const PackConfig& cfg) {
    if (pool.size() > kExhaustivePoolLimit)
        throw Error(Errc::pool_too_large,
                    "exhaustive packing is limited to " + std::to_string(kExhaustivePoolLimit) +
                        " peptides, got " + std::to_string(pool.size()));

    std::vector<int> perm = order_alphabetical(pool);
    auto seq_less = [&pool](int a, int b) { return pool.sequence(a) < pool.sequence(b); };

    detail::StreamTable streams = detail::all_bit_streams(pool);
    std::optional<std::vector<detail::TileIds>> best;
    std::size_t best_tiles = 0, best_total = 0;
    if (!perm.empty()) {
        do {
            auto partition = detail::sequential_partition(pool, perm, cfg, streams);
            std::size_t total = 0;
            for (const auto& t : partition) total += t.cost.total;
            if (!best || partition.size() < best_tiles ||
                (partition.size() == best_tiles && total < best_total)) {
                best_tiles = partition.size();
                best_total = total;
                best = std::move(partition);
            }
        } while (std::next_permutation(perm.begin(), perm.end(), seq_less));
    }
    return detail::make_plan(pool, best ? std::move(*best) : std::vector<detail::TileIds>{}, cfg,
                             "exhaustive");
}

// Cross-strategy comparison data; rendering lives in the emit module.
struct ComparisonReport {
    struct Row {
        std::string strategy;
        std::size_t tile_count = 0;
        std::size_t total_states = 0;
        std::size_t min_peptides = 0;
        std::size_t max_peptides = 0;
    };
    struct Increment {
        std::string from;  // the baseline ("a" in (a-b)/a)
        std::string to;
        std::size_t from_tiles = 0;
        std::size_t to_tiles = 0;
    };
    struct BudgetRow {
        std::size_t budget = 0;
        std::vector<std::size_t> admitted;  // one entry per row, same order
    };

    std::vector<Row> rows;
    std::vector<Increment> increments;
    std::vector<BudgetRow> budget_rows;
};

namespace detail {

// Peptides admitted into one uncapped tile, following the plan's global
// insertion order, before total states exceed the budget.
inline std::size_t admitted_under_budget(const PackingPlan& plan, std::size_t budget) {
    PackConfig uncapped = plan.config;
    uncapped.state_cap = std::numeric_limits<std::size_t>::max();
    uncapped.max_peptides_per_tile.reset();
    StreamTable streams = all_bit_streams(plan.pool);
    TileCostTracker tracker(plan.pool, uncapped, streams);
    std::size_t admitted = 0;
    for (const Tile& tile : plan.tiles) {
        for (int id : tile.peptide_ids) {
            auto p = tracker.probe(id);
            if (p->after.total > budget) return admitted;
            tracker.add(id, p->after);
            ++admitted;
        }
    }
    return admitted;
}

}  // namespace detail

inline ComparisonReport compare_plans(const std::vector<PackingPlan>& plans,
                                      const std::vector<std::size_t>& budgets = {}) {
    ComparisonReport report;
    for (const PackingPlan& plan : plans) {
        if (!(plan.pool == plans.front().pool))
            throw Error(Errc::mismatched_pools, "compared plans cover different pools");
        report.rows.push_back({plan.strategy, plan.metrics.tile_count, plan.metrics.total_states,
                               plan.metrics.min_peptides_in_tile,
                               plan.metrics.max_peptides_in_tile});
    }
    for (const auto& a : report.rows)
        for (const auto& b : report.rows)
            if (&a != &b)
                report.increments.push_back({a.strategy, b.strategy, a.tile_count, b.tile_count});
    for (std::size_t budget : budgets) {
        ComparisonReport::BudgetRow row{budget, {}};
        for (const PackingPlan& plan : plans)
            row.admitted.push_back(detail::admitted_under_budget(plan, budget));
        report.budget_rows.push_back(std::move(row));
    }
    return report;
}

// Partition and cap invariants of a plan, re-measured from scratch.
inline bool validate_plan(const PackingPlan& plan, std::string* why = nullptr) {
    auto fail = [why](const std::string& reason) {
        if (why) *why = reason;
        return false;
    };
    std::vector<int> seen(plan.pool.size(), 0);
    for (const Tile& tile : plan.tiles) {
        if (tile.peptide_ids.empty()) return fail("tile " + std::to_string(tile.index) + " is empty");
        for (int id : tile.peptide_ids) {
            if (id < 0 || static_cast<std::size_t>(id) >= plan.pool.size())
                return fail("peptide id out of range");
            if (seen[id]++) return fail("peptide " + std::to_string(id) + " in more than one tile");
        }
        if (plan.config.max_peptides_per_tile &&
            tile.peptide_ids.size() > *plan.config.max_peptides_per_tile)
            return fail("tile " + std::to_string(tile.index) + " exceeds max peptides per tile");
        CostReport measured = state_cost(plan.pool.subset(tile.peptide_ids), plan.config.cost_mode);
        if (!(measured == tile.cost))
            return fail("tile " + std::to_string(tile.index) + " cost disagrees with re-measurement");
        if (plan.config.cap_scope == CapScope::aggregate) {
            if (measured.total > plan.config.state_cap)
                return fail("tile " + std::to_string(tile.index) + " exceeds aggregate cap");
        } else {
            for (auto n : measured.per_machine)
                if (n > plan.config.state_cap)
                    return fail("tile " + std::to_string(tile.index) + " exceeds per-machine cap");
        }
    }
    for (std::size_t id = 0; id < plan.pool.size(); ++id)
        if (!seen[id]) return fail("peptide " + std::to_string(id) + " missing from the plan");
    return true;
}

}  // namespace pepfsm
