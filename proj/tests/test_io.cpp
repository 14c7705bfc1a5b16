#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace dbent;

namespace {

const char* genbank_fixture = R"(LOCUS       NC_012920              16569 bp    DNA     circular PRI 13-NOV-2023
DEFINITION  Homo sapiens mitochondrion, complete genome.
SOURCE      mitochondrion Homo sapiens (human)
  ORGANISM  Homo sapiens
            Eukaryota; Metazoa; Chordata; Craniata; Vertebrata; Euteleostomi;
            Mammalia; Eutheria; Euarchontoglires; Primates; Haplorrhini;
            Catarrhini; Hominidae; Homo.
REFERENCE   1  (bases 1 to 16569)
  AUTHORS   Someone
//
LOCUS       NC_001643              16554 bp    DNA     circular PRI 13-NOV-2023
SOURCE      mitochondrion Pan troglodytes (chimpanzee)
  ORGANISM  Pan troglodytes
            Eukaryota; Metazoa; Chordata; Craniata; Vertebrata; Euteleostomi;
            Mammalia; Eutheria; Euarchontoglires; Primates; Haplorrhini;
            Catarrhini; Hominidae; Pan.
REFERENCE   1  (bases 1 to 16554)
//
)";

}  // namespace

TEST(Fasta, ParsesRecordsAndNormalizes) {
    const auto recs = io::parse_fasta(">one first\r\nacgt\r\nNNxA\r\n\r\n>two\nGGCC\n");
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].description, "one first");
    EXPECT_EQ(recs[0].sequence, "ACGTNNNA");
    EXPECT_EQ(recs[1].sequence, "GGCC");
}

TEST(Fasta, Errors) {
    EXPECT_THROW(io::parse_fasta("ACGT\n>x\nA\n"), std::invalid_argument);
    EXPECT_THROW(io::parse_fasta(""), std::invalid_argument);
    EXPECT_THROW(io::parse_fasta(">x\n>y\nA\n"), std::invalid_argument);
}

TEST(Fasta, IdempotentOnRenderedOutput) {
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 100; ++trial) {
        std::string text;
        for (int r = 0; r < 1 + static_cast<int>(rng() % 5); ++r) {
            text += ">rec " + std::to_string(r) + " |Homo sapiens x\n";
            for (int line = 0; line < 1 + static_cast<int>(rng() % 4); ++line) {
                std::string s(1 + rng() % 90, 'a');
                for (auto& c : s) c = "acgtACGTnRY"[rng() % 11];
                text += s + (rng() % 2 ? "\n" : "\r\n");
            }
        }
        const auto once = io::parse_fasta(text);
        const auto twice = io::parse_fasta(io::render_fasta(once, 1 + rng() % 80));
        ASSERT_EQ(once.size(), twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            EXPECT_EQ(once[i].description, twice[i].description);
            EXPECT_EQ(once[i].sequence, twice[i].sequence);
        }
    }
}

TEST(GenBank, LineagesFromOrganismBlocks) {
    const auto l = io::parse_genbank_lineages(genbank_fixture);
    ASSERT_EQ(l.size(), 2u);
    ASSERT_EQ(l[0].size(), 14u);
    EXPECT_EQ(l[0].front(), "Eukaryota");
    EXPECT_EQ(l[0][9], "Primates");
    EXPECT_EQ(l[0].back(), "Homo");
    EXPECT_EQ(l[1].back(), "Pan");
    const auto skipped = io::parse_genbank_lineages(genbank_fixture, 10);
    EXPECT_EQ(skipped[0], (io::TaxaLineage{"Haplorrhini", "Catarrhini", "Hominidae", "Homo"}));
    EXPECT_THROW(io::parse_genbank_lineages(genbank_fixture, 14), std::invalid_argument);
}

TEST(GenBank, MissingReferenceIsAnError) {
    EXPECT_THROW(io::parse_genbank_lineages("  ORGANISM  X\n            A; B.\n"), std::invalid_argument);
}

TEST(Labels, SpeciesFromDescription) {
    EXPECT_EQ(io::species_label("gi|123|ref|NC_012920.1| Homo sapiens mitochondrion, complete genome"), "Homo sapiens");
    EXPECT_EQ(io::species_label("no bars here"), "no bars here");
    EXPECT_EQ(io::species_label("a|b|Lonely"), "a|b|Lonely");
}

TEST(Csv, DistanceMatrixRoundTrip) {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        DistanceMatrix d(n);
        for (std::size_t i = 0; i < n; ++i) {
            d.labels.push_back(i % 3 == 0 ? "Homo \"x\", sapiens" : "s" + std::to_string(i));
            for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, std::uniform_real_distribution<double>(0, 100)(rng));
        }
        const auto back = io::read_distance_csv(io::write_distance_csv(d));
        ASSERT_EQ(back.size, n);
        EXPECT_EQ(back.labels, d.labels);
        for (std::size_t i = 0; i < n * n; ++i) EXPECT_NEAR(back.values[i], d.values[i], 1e-12);
    }
}

TEST(Csv, DefaultLabels) {
    DistanceMatrix d(2);
    d.set(0, 1, 0.25);
    EXPECT_EQ(io::write_distance_csv(d), "label,s1,s2\ns1,0,0.25\ns2,0.25,0\n");
}

TEST(Csv, RejectsMalformedMatrices) {
    EXPECT_THROW(io::read_distance_csv(""), std::invalid_argument);
    EXPECT_THROW(io::read_distance_csv("label,a,b\na,0,1\n"), std::invalid_argument);
    EXPECT_THROW(io::read_distance_csv("label,a,b\na,0,1\nb,2,0\n"), std::invalid_argument);
    EXPECT_THROW(io::read_distance_csv("label,a,b\na,1,1\nb,1,0\n"), std::invalid_argument);
    EXPECT_THROW(io::read_distance_csv("label,a,b\na,0,x\nb,1,0\n"), std::invalid_argument);
    EXPECT_THROW(io::read_distance_csv("label,\"a\n"), std::invalid_argument);
}
