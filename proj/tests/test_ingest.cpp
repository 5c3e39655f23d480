#include <catch2/catch_amalgamated.hpp>

#include "pepfsm/amino.hpp"
#include "pepfsm/digest.hpp"
#include "pepfsm/fasta.hpp"
#include "pepfsm/peptide.hpp"

#include "oracles.hpp"

using namespace pepfsm;

TEST_CASE("residue codes are the alphabetical ranks") {
    REQUIRE(residue_code('A') == 0);
    REQUIRE(residue_code('C') == 1);
    REQUIRE(residue_code('D') == 2);
    REQUIRE(residue_code('E') == 3);
    REQUIRE(residue_code('Y') == 19);

    SECTION("bijective over all 20 residues") {
        for (int c = 0; c < kAlphabetSize; ++c)
            REQUIRE(residue_code(residue_letter(static_cast<ResidueCode>(c))) == c);
        for (char letter : kResidues) REQUIRE(is_canonical(letter));
    }

    SECTION("non-canonical letters rejected") {
        for (char letter : {'B', 'J', 'O', 'U', 'X', 'Z', 'a', '*', ' '})
            REQUIRE_FALSE(is_canonical(letter));
        try {
            encode_sequence("ABC");
            FAIL("expected InvalidResidue");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::invalid_residue);
            REQUIRE(e.position() == 1);
        }
    }
}

TEST_CASE("bit_split_strings splits codes MSB first") {
    // A=00000, C=00001, E=00011
    BitStreams ace = bit_split_strings("ACE");
    REQUIRE(ace.streams == std::array<std::string, 5>{"000", "000", "000", "001", "011"});

    REQUIRE(bit_split_strings("A").streams == std::array<std::string, 5>{"0", "0", "0", "0", "0"});

    // Y = 19 = 10011
    REQUIRE(bit_split_strings("YY").streams ==
            std::array<std::string, 5>{"11", "00", "00", "11", "11"});
}

TEST_CASE("bit stream columns reassemble the residue codes") {
    std::mt19937_64 rng(0x5eed01);
    for (int round = 0; round < 50; ++round) {
        std::string peptide = oracles::random_peptide(rng, 2, 16);
        BitStreams bs = bit_split_strings(peptide);
        for (const auto& stream : bs.streams) REQUIRE(stream.size() == peptide.size());
        for (std::size_t i = 0; i < peptide.size(); ++i) {
            int code = 0;
            for (int j = 0; j < kResidueBits; ++j)
                code = code * 2 + (bs.streams[j][i] - '0');
            REQUIRE(code == residue_code(peptide[i]));
        }
    }
}

TEST_CASE("parse_fasta") {
    SECTION("single record") {
        auto records = parse_fasta(">p1\nHERS\n");
        REQUIRE(records == std::vector<ProteinRecord>{{"p1", "HERS"}});
    }
    SECTION("sequence lines concatenate") {
        auto records = parse_fasta(">p1\nHE\nRS\n>p2\nACE\n");
        REQUIRE(records.size() == 2);
        REQUIRE(records[0].sequence == "HERS");
        REQUIRE(records[1].sequence == "ACE");
    }
    SECTION("lowercase and inner whitespace are normalized") {
        auto records = parse_fasta(">p\nhe rs\n");
        REQUIRE(records[0].sequence == "HERS");
    }
    SECTION("sequence before first header") {
        REQUIRE_THROWS_MATCHES(parse_fasta("ACDE\n"), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::malformed_fasta;
                               }));
    }
    SECTION("empty input") {
        REQUIRE_THROWS_MATCHES(parse_fasta(""), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == Errc::empty_input;
                               }));
        REQUIRE_THROWS_AS(parse_fasta("\n  \n"), Error);
    }
    SECTION("header with no sequence") {
        REQUIRE_THROWS_AS(parse_fasta(">only-header\n"), Error);
        REQUIRE_THROWS_AS(parse_fasta(">a\n>b\nACE\n"), Error);
    }
}

TEST_CASE("parse_peptide_list skips comments and blank lines") {
    auto peptides = parse_peptide_list("# fixture\nACE  \n\nhers\n# tail\nAAK\n");
    REQUIRE(peptides == std::vector<std::string>{"ACE", "HERS", "AAK"});
}

TEST_CASE("tryptic digestion") {
    SECTION("cleavage after K/R blocked by proline") {
        auto peptides = digest({"p", "AAKPAAKAAR"});
        REQUIRE(peptides == std::vector<std::string>{"AAKPAAK", "AAR"});
    }
    SECTION("no cleavage site") {
        REQUIRE(digest({"p", "ACDE"}) == std::vector<std::string>{"ACDE"});
    }
    SECTION("one missed cleavage emits adjacent concatenations") {
        DigestConfig cfg;
        cfg.missed_cleavages = 1;
        REQUIRE(digest({"p", "AAKPAAKAAR"}, cfg) ==
                std::vector<std::string>{"AAKPAAK", "AAR", "AAKPAAKAAR"});
    }
    SECTION("length filter applies last") {
        DigestConfig cfg;
        cfg.min_len = 4;
        REQUIRE(digest({"p", "AAKPAAKAAR"}, cfg) == std::vector<std::string>{"AAKPAAK"});
        cfg.min_len = 2;
        cfg.max_len = 3;
        REQUIRE(digest({"p", "AAKPAAKAAR"}, cfg) == std::vector<std::string>{"AAR"});
    }
    SECTION("non-canonical residue reports its position") {
        try {
            digest({"p", "AAXK"});
            FAIL("expected InvalidResidue");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::invalid_residue);
            REQUIRE(e.position() == 2);
        }
    }
    SECTION("bad config") {
        DigestConfig cfg;
        cfg.min_len = 8;
        cfg.max_len = 4;
        REQUIRE_THROWS_AS(digest({"p", "ACDE"}, cfg), Error);
    }
}

TEST_CASE("tryptic fragments partition the protein") {
    std::mt19937_64 rng(0x5eed02);
    for (int round = 0; round < 100; ++round) {
        std::string protein = oracles::random_protein(rng, 1 + rng() % 200);
        auto fragments = tryptic_fragments(protein);
        std::string rejoined;
        for (const auto& f : fragments) rejoined += f;
        REQUIRE(rejoined == protein);
        // every fragment but the last ends at a cleavage site
        for (std::size_t i = 0; i + 1 < fragments.size(); ++i) {
            char last = fragments[i].back();
            REQUIRE((last == 'K' || last == 'R'));
            REQUIRE(fragments[i + 1].front() != 'P');
        }
    }
}

TEST_CASE("build_pool dedups and assigns dense ids") {
    SECTION("duplicates keep first occurrence") {
        PeptidePool pool = build_pool({"ACE", "ACE", "HE"});
        REQUIRE(pool.size() == 2);
        REQUIRE(pool[0] == Peptide{0, "ACE"});
        REQUIRE(pool[1] == Peptide{1, "HE"});
    }
    SECTION("empty input") { REQUIRE(build_pool({}).empty()); }
    SECTION("input order preserved") {
        PeptidePool pool = build_pool({"HE", "ACE"});
        REQUIRE(pool[0].sequence == "HE");
        REQUIRE(pool[1].sequence == "ACE");
    }
    SECTION("idempotent") {
        PeptidePool once = build_pool({"HE", "ACE", "HE", "AAK"});
        std::vector<std::string> again;
        for (const auto& p : once.peptides()) again.push_back(p.sequence);
        REQUIRE(build_pool(again) == once);
    }
    SECTION("dipeptide minimum") {
        REQUIRE_THROWS_AS(build_pool({"A"}), Error);
        REQUIRE_THROWS_AS(build_pool({""}), Error);
    }
}
