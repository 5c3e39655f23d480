// pepfsm: compile peptide sets into tile-packed, bit-split keyword FSMs and
// emit VHDL, DOT graphs, and transition tables, with a built-in simulator
// that checks the generated machines against the reference matcher.
//
// Exit codes: 0 success, 1 verification failure, 2 input/IO error,
// 3 packing infeasibility.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pepfsm/manifest.hpp"
#include "pepfsm/pepfsm.hpp"

namespace fs = std::filesystem;
using namespace pepfsm;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitPackingError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error(Errc::io_error, "write failed for '" + path.string() + "'");
}

fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PEPFSM_OUT_DIR"); env && *env) return env;
    return ".";
}

class StageTimer {
public:
    explicit StageTimer(RunManifest& manifest) : manifest_(manifest) {}

    template <typename Fn>
    auto time(const std::string& stage, Fn&& fn) {
        auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            record(stage, start);
        } else {
            auto result = fn();
            record(stage, start);
            return result;
        }
    }

private:
    void record(const std::string& stage, std::chrono::steady_clock::time_point start) {
        auto elapsed = std::chrono::steady_clock::now() - start;
        manifest_.timings_ms.emplace_back(
            stage, std::chrono::duration<double, std::milli>(elapsed).count());
    }

    RunManifest& manifest_;
};

struct DigestOptions {
    std::string fasta_path;
    std::string out_path;
    int missed_cleavages = 0;
    std::size_t min_len = 2;
    std::size_t max_len = 0;  // 0 = unbounded
};

int run_digest(const DigestOptions& opt) {
    DigestConfig cfg;
    cfg.missed_cleavages = opt.missed_cleavages;
    cfg.min_len = opt.min_len;
    if (opt.max_len) cfg.max_len = opt.max_len;

    auto records = parse_fasta(read_file(opt.fasta_path));
    std::vector<std::string> peptides;
    for (const auto& record : records)
        for (auto& peptide : digest(record, cfg)) peptides.push_back(std::move(peptide));

    std::ostringstream body;
    for (const auto& peptide : peptides) body << peptide << "\n";
    fs::path out = opt.out_path.empty() ? resolve_out_dir("") / "peptides.txt" : fs::path(opt.out_path);
    write_file(out, body.str());

    std::size_t min_len = 0, max_len = 0, total_len = 0;
    for (const auto& p : peptides) {
        if (min_len == 0 || p.size() < min_len) min_len = p.size();
        max_len = std::max(max_len, p.size());
        total_len += p.size();
    }
    std::cout << "digested " << records.size() << " protein(s) into " << peptides.size()
              << " peptide(s) -> " << out.string() << "\n";
    if (!peptides.empty())
        std::cout << "lengths: min " << min_len << ", max " << max_len << ", mean "
                  << static_cast<double>(total_len) / static_cast<double>(peptides.size()) << "\n";
    return 0;
}

struct PackOptions {
    std::string peptides_path;
    std::string strategy = "greedy";
    std::string out_dir;
    PackConfig cfg;
    std::size_t max_peptides = 0;  // 0 = unlimited
    std::vector<std::size_t> budgets;
};

int run_pack(const PackOptions& opt) {
    PackConfig cfg = opt.cfg;
    if (opt.max_peptides) cfg.max_peptides_per_tile = opt.max_peptides;

    PeptidePool pool = build_pool(parse_peptide_list(read_file(opt.peptides_path)));
    fs::path out_dir = resolve_out_dir(opt.out_dir);

    std::vector<std::string> strategies;
    if (opt.strategy == "all") {
        strategies = {"sequential", "fit-scan", "greedy"};
        if (pool.size() <= kExhaustivePoolLimit) strategies.push_back("exhaustive");
    } else {
        strategies = {opt.strategy};
    }

    std::vector<PackingPlan> plans;
    for (const auto& name : strategies) {
        if (name == "sequential")
            plans.push_back(pack_sequential(pool, cfg));
        else if (name == "fit-scan")
            plans.push_back(pack_fit_scan(pool, cfg));
        else if (name == "greedy")
            plans.push_back(pack_greedy(pool, cfg));
        else
            plans.push_back(pack_exhaustive(pool, cfg));
    }

    for (const PackingPlan& plan : plans) {
        std::string file_name = "plan_" + plan.strategy + ".txt";
        write_file(out_dir / file_name, serialize_plan(plan));
        std::cout << plan.strategy << ": " << plan.metrics.tile_count << " tile(s), "
                  << plan.metrics.total_states << " total states -> "
                  << (out_dir / file_name).string() << "\n";
    }

    if (plans.size() > 1) {
        ReportDocs docs = emit_report(compare_plans(plans, opt.budgets));
        write_file(out_dir / "report.txt", docs.text);
        write_file(out_dir / "report.csv", docs.csv);
        std::cout << "comparison -> " << (out_dir / "report.txt").string() << "\n";
    }
    return 0;
}

struct EmitOptions {
    std::string plan_path;
    std::string out_dir;
    std::string formats = "vhdl,dot,table";
};

int run_emit(const EmitOptions& opt) {
    bool want_vhdl = false, want_dot = false, want_table = false;
    {
        std::istringstream in(opt.formats);
        std::string fmt;
        while (std::getline(in, fmt, ',')) {
            if (fmt == "vhdl")
                want_vhdl = true;
            else if (fmt == "dot")
                want_dot = true;
            else if (fmt == "table")
                want_table = true;
            else
                throw Error(Errc::invalid_config, "unknown format '" + fmt + "'");
        }
    }

    RunManifest manifest;
    manifest.command = "emit";
    manifest.inputs = {opt.plan_path};
    manifest.config = {{"formats", opt.formats}};
    StageTimer timer(manifest);

    PackingPlan plan = timer.time("parse_plan", [&] { return parse_plan(read_file(opt.plan_path)); });
    fs::path out_dir = resolve_out_dir(opt.out_dir);
    manifest.output_dir = out_dir.string();

    std::vector<std::pair<std::string, std::string>> outputs;  // name -> content
    if (want_vhdl)
        timer.time("emit_vhdl", [&] {
            for (VhdlUnit& unit : emit_vhdl_plan(plan))
                outputs.emplace_back(std::move(unit.file_name), std::move(unit.source));
        });
    if (want_dot || want_table)
        timer.time("emit_graphs_tables", [&] {
            for (const Tile& tile : plan.tiles) {
                std::string stem = "tile" + std::to_string(tile.index);
                AcAutomaton full = build_automaton(plan.pool.subset(tile.peptide_ids));
                for (int j = 0; j < kResidueBits; ++j) {
                    std::string scope = stem + "_bit" + std::to_string(j);
                    if (want_dot)
                        outputs.emplace_back("fsm_" + scope + ".dot",
                                             emit_dot(tile.machines.fsms[j], "fsm_" + scope));
                    if (want_table)
                        outputs.emplace_back("fsm_" + scope + ".csv",
                                             emit_table_csv(tile.machines.fsms[j]));
                }
                if (want_dot)
                    outputs.emplace_back("fsm_" + stem + "_full.dot",
                                         emit_dot(full, "fsm_" + stem + "_full"));
                if (want_table)
                    outputs.emplace_back("fsm_" + stem + "_full.csv", emit_table_csv(full));
            }
        });

    timer.time("write_files", [&] {
        for (const auto& [name, content] : outputs) {
            write_file(out_dir / name, content);
            manifest.add_file(name, content);
        }
    });

    write_file(out_dir / "manifest.json", manifest.to_json());
    std::cout << "emitted " << outputs.size() << " file(s) + manifest.json -> " << out_dir.string()
              << "\n";
    return 0;
}

struct VerifyOptions {
    std::string plan_path;
    std::vector<std::string> text_paths;
    std::string random_spec;  // "count,length,seed"
    std::string trace_path;
};

std::vector<std::string> load_texts(const std::string& path) {
    std::string raw = read_file(path);
    std::vector<std::string> texts;
    if (!raw.empty() && raw[0] == '>') {
        for (auto& record : parse_fasta(raw)) texts.push_back(std::move(record.sequence));
    } else {
        std::string text;
        for (char ch : raw)
            if (!std::isspace(static_cast<unsigned char>(ch)))
                text.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
        texts.push_back(std::move(text));
    }
    return texts;
}

// Seeded text generation; plain mt19937_64 plus modulo so the same arguments
// reproduce the same texts on any platform.
std::vector<std::string> random_texts(const std::string& arg) {
    auto parts = detail::PlanReader::split(arg, ',');
    if (parts.size() != 3) throw Error(Errc::invalid_config, "--random wants count,length,seed");
    std::size_t count = detail::PlanReader::to_number(parts[0], "random count");
    std::size_t length = detail::PlanReader::to_number(parts[1], "random length");
    std::uint64_t seed = detail::PlanReader::to_number(parts[2], "random seed");

    std::mt19937_64 rng(seed);
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < count; ++i) {
        std::string text(length, 'A');
        for (char& ch : text) ch = kResidues[rng() % kAlphabetSize];
        texts.push_back(std::move(text));
    }
    return texts;
}

int run_verify(const VerifyOptions& opt) {
    PackingPlan plan = parse_plan(read_file(opt.plan_path));

    std::vector<std::string> texts;
    for (const auto& path : opt.text_paths)
        for (auto& text : load_texts(path)) texts.push_back(std::move(text));
    if (!opt.random_spec.empty())
        for (auto& text : random_texts(opt.random_spec)) texts.push_back(std::move(text));

    VerificationReport report = verify(plan, texts);
    std::cout << render_report(report);

    if (!opt.trace_path.empty() && !texts.empty() && !plan.tiles.empty()) {
        SimTrace trace;
        simulate_tile(plan.tiles.front(), texts.front(), &trace);
        write_file(opt.trace_path, trace_to_csv(trace));
        std::cout << "tile 0 trace for text 0 -> " << opt.trace_path << "\n";
    }
    return report.all_pass ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pepfsm: peptide set to bit-split FSM tile compiler"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    DigestOptions digest_opt;
    auto* digest_cmd = app.add_subcommand("digest", "tryptic in-silico digestion of FASTA proteins");
    digest_cmd->add_option("fasta", digest_opt.fasta_path, "FASTA input")->required();
    digest_cmd->add_option("-o,--out", digest_opt.out_path, "peptide list output path");
    digest_cmd->add_option("--missed-cleavages", digest_opt.missed_cleavages,
                           "missed cleavages (default 0)");
    digest_cmd->add_option("--min-len", digest_opt.min_len, "minimum peptide length (default 2)");
    digest_cmd->add_option("--max-len", digest_opt.max_len, "maximum peptide length (default none)");

    PackOptions pack_opt;
    auto* pack_cmd = app.add_subcommand("pack", "assign peptides to tiles under a state cap");
    pack_cmd->add_option("peptides", pack_opt.peptides_path, "peptide list input")->required();
    pack_cmd->add_option("--strategy", pack_opt.strategy, "sequential|fit-scan|greedy|exhaustive|all")
        ->check(CLI::IsMember({"sequential", "fit-scan", "greedy", "exhaustive", "all"}));
    pack_cmd->add_option("-o,--out", pack_opt.out_dir, "output directory");
    pack_cmd->add_option("--state-cap", pack_opt.cfg.state_cap, "state cap (default 256)");
    pack_cmd
        ->add_option_function<std::string>(
            "--cap-scope",
            [&pack_opt](const std::string& v) {
                pack_opt.cfg.cap_scope = v == "aggregate" ? CapScope::aggregate : CapScope::per_machine;
            },
            "per-machine|aggregate (default per-machine)")
        ->check(CLI::IsMember({"per-machine", "aggregate"}));
    pack_cmd
        ->add_option_function<std::string>(
            "--cost-mode",
            [&pack_opt](const std::string& v) {
                pack_opt.cfg.cost_mode = v == "trie" ? CostMode::trie : CostMode::exact;
            },
            "exact|trie (default exact)")
        ->check(CLI::IsMember({"exact", "trie"}));
    pack_cmd->add_option("--max-peptides", pack_opt.max_peptides,
                         "max peptides per tile (default unlimited)");
    pack_cmd
        ->add_option_function<std::string>(
            "--seed-rule",
            [&pack_opt](const std::string& v) {
                pack_opt.cfg.seed_rule =
                    v == "rng" ? SeedRule::rng : SeedRule::lexicographic_first;
            },
            "lexicographic-first|rng (default lexicographic-first)")
        ->check(CLI::IsMember({"lexicographic-first", "rng"}));
    pack_cmd->add_option("--seed", pack_opt.cfg.seed, "seed for --seed-rule rng");
    pack_cmd->add_option("--budgets", pack_opt.budgets,
                         "state budgets for the peptides-per-budget report view");

    EmitOptions emit_opt;
    auto* emit_cmd = app.add_subcommand("emit", "emit VHDL, DOT graphs and transition tables");
    emit_cmd->add_option("plan", emit_opt.plan_path, "packing plan input")->required();
    emit_cmd->add_option("-o,--out", emit_opt.out_dir, "output directory");
    emit_cmd->add_option("--formats", emit_opt.formats, "comma list of vhdl,dot,table");

    VerifyOptions verify_opt;
    auto* verify_cmd =
        app.add_subcommand("verify", "simulate a plan and compare with the reference matcher");
    verify_cmd->add_option("plan", verify_opt.plan_path, "packing plan input")->required();
    verify_cmd->add_option("--text", verify_opt.text_paths, "FASTA or raw residue text file");
    verify_cmd->add_option("--random", verify_opt.random_spec, "generate texts: count,length,seed");
    verify_cmd->add_option("--trace", verify_opt.trace_path, "dump tile 0 cycle trace CSV here");

    try {
        app.parse(argc, argv);
        if (*digest_cmd) return run_digest(digest_opt);
        if (*pack_cmd) return run_pack(pack_opt);
        if (*emit_cmd) return run_emit(emit_opt);
        if (*verify_cmd) return run_verify(verify_opt);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == Errc::single_peptide_exceeds_cap || e.code() == Errc::pool_too_large)
            return kExitPackingError;
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return 0;
}
