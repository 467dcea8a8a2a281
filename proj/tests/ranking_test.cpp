#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <credit_alloc/ranking.hpp>

namespace ca = credit_alloc;

namespace {

constexpr const char* kHeader = "field,journal,rank,total,impact_factor\n";

ca::RankingTable csv(const std::string& body, bool header = true) {
  return ca::parse_ranking_table(std::string(header ? kHeader : "") + body, ca::TableFormat::Csv);
}

std::size_t error_record(const std::string& text, ca::TableFormat fmt) {
  try {
    ca::parse_ranking_table(text, fmt);
  } catch (const ca::RankingParseError& e) {
    return e.record();
  }
  ADD_FAILURE() << "expected a parse error for:\n" << text;
  return 0;
}

std::string error_message(const std::string& text, ca::TableFormat fmt) {
  try {
    ca::parse_ranking_table(text, fmt);
  } catch (const ca::RankingParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(RankingCsv, SampleRows) {
  const auto t = csv(
      "Fisheries,Fisheries Research,12,50,1.843\n"
      "Geochemistry & Geophysics,Earth and Planetary Science Letters,5,80,4.724\n");
  ASSERT_EQ(t.size(), 2u);
  const auto& fr = t.entries()[0];
  EXPECT_EQ(fr.field, "Fisheries");
  EXPECT_EQ(fr.journal, "Fisheries Research");
  EXPECT_EQ(fr.rank, 12);
  EXPECT_EQ(fr.total, 50);
  EXPECT_DOUBLE_EQ(fr.impact_factor, 1.843);
  EXPECT_EQ(t.entries()[1].rank, 5);
  EXPECT_EQ(t.entries()[1].total, 80);
}

TEST(RankingCsv, EmptyInputs) {
  EXPECT_TRUE(ca::parse_ranking_table("", ca::TableFormat::Csv).empty());
  EXPECT_TRUE(ca::parse_ranking_table("\n\n", ca::TableFormat::Csv).empty());
  EXPECT_TRUE(ca::parse_ranking_table(kHeader, ca::TableFormat::Csv).empty());
  EXPECT_TRUE(ca::parse_ranking_table("", ca::TableFormat::Json).empty());
  EXPECT_TRUE(ca::parse_ranking_table("[]", ca::TableFormat::Json).empty());
}

TEST(RankingCsv, CrlfBomAndQuoting) {
  const std::string text =
      "\xEF\xBB\xBF" "field,journal,rank,total,impact_factor\r\n"
      "\"Physics, Multidisciplinary\",\"Physica A: \"\"Statistical\"\"\",25,78,1.722\r\n";
  const auto t = ca::parse_ranking_table(text, ca::TableFormat::Csv);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.entries()[0].field, "Physics, Multidisciplinary");
  EXPECT_EQ(t.entries()[0].journal, "Physica A: \"Statistical\"");
}

TEST(RankingCsv, RowOrderPreserved) {
  const auto t = csv("B,z,2,3,0\nA,y,1,3,0\nB,x,1,3,0\n");
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t.entries()[0].journal, "z");
  EXPECT_EQ(t.entries()[1].journal, "y");
  EXPECT_EQ(t.entries()[2].journal, "x");
}

TEST(RankingCsv, MalformedRowsReportLineNumbers) {
  using F = ca::TableFormat;
  const std::string h = kHeader;
  EXPECT_EQ(error_record(h + "A,x,1,3,0\nA,y,2,3\n", F::Csv), 3u);             // short row
  EXPECT_EQ(error_record(h + "A,x,1,3,0,extra\n", F::Csv), 2u);                // extra column
  EXPECT_EQ(error_record(h + "A,x,one,3,0\n", F::Csv), 2u);                    // rank text
  EXPECT_EQ(error_record(h + "A,x,1.5,3,0\n", F::Csv), 2u);                    // rank not integral
  EXPECT_EQ(error_record(h + "\nA,x,4,3,0\n", F::Csv), 3u);                    // rank > total
  EXPECT_EQ(error_record(h + "A,x,0,3,0\n", F::Csv), 2u);                      // rank 0
  EXPECT_EQ(error_record(h + "A,x,1,3,-1\n", F::Csv), 2u);                     // negative IF
  EXPECT_EQ(error_record(h + "A,x,1,3,nan\n", F::Csv), 2u);                    // NaN IF
  EXPECT_EQ(error_record(h + "A,,1,3,0\n", F::Csv), 2u);                       // empty journal
  EXPECT_EQ(error_record(h + " ,x,1,3,0\n", F::Csv), 2u);                      // blank field
  EXPECT_EQ(error_record(h + "A,\"x,1,3,0\n", F::Csv), 2u);                    // open quote
  EXPECT_EQ(error_record("journal,field,rank,total,impact_factor\n", F::Csv), 1u);
  EXPECT_EQ(error_record("A,x,1,3,0\n", F::Csv), 1u);                          // header missing
  EXPECT_EQ(error_record("field,journal,rank,total,impact_factor,notes\n", F::Csv), 1u);
}

TEST(RankingCsv, LocaleIndependentNumbers) {
  const std::string h = kHeader;
  EXPECT_DOUBLE_EQ(csv("A,x,1,3,1.5\n").entries()[0].impact_factor, 1.5);
  // decimal comma splits into six columns; thousands separators are not numbers
  EXPECT_EQ(error_record(h + "A,x,1,3,1,5\n", ca::TableFormat::Csv), 2u);
  EXPECT_EQ(error_record(h + "A,x,1,\"1,000\",0\n", ca::TableFormat::Csv), 2u);
  EXPECT_EQ(error_record(h + "A,x,1,1 000,0\n", ca::TableFormat::Csv), 2u);
}

TEST(RankingCsv, DuplicateKeyNamesThePair) {
  const std::string text = std::string(kHeader) + "Fisheries,Fisheries Research,12,50,1.8\n" +
                           "fisheries , FISHERIES RESEARCH,13,50,1.8\n";
  EXPECT_EQ(error_record(text, ca::TableFormat::Csv), 3u);
  const auto msg = error_message(text, ca::TableFormat::Csv);
  EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
  EXPECT_NE(msg.find("FISHERIES RESEARCH"), std::string::npos) << msg;
}

TEST(RankingCsv, InconsistentFieldTotalNamesTheField) {
  const std::string text = std::string(kHeader) + "Fisheries,A,1,50,0\nFisheries,B,2,51,0\n";
  EXPECT_EQ(error_record(text, ca::TableFormat::Csv), 3u);
  EXPECT_NE(error_message(text, ca::TableFormat::Csv).find("'Fisheries'"), std::string::npos);
  // partial tables are fine
  EXPECT_EQ(csv("Fisheries,A,1,50,0\nFisheries,B,40,50,0\n").size(), 2u);
}

TEST(RankingCsv, RejectsInvalidUtf8) {
  EXPECT_THROW(csv("A,\xC3\x28,1,3,0\n"), ca::RankingParseError);
  EXPECT_THROW(csv("A,\xED\xA0\x80,1,3,0\n"), ca::RankingParseError);  // surrogate
  EXPECT_EQ(csv("Física,Revista \xC3\xA9tica,1,3,0\n").entries()[0].journal, "Revista \xC3\xA9tica");
}

TEST(RankingJson, ParsesArrayOfObjects) {
  const auto t = ca::parse_ranking_table(
      R"([{"field": "Fisheries", "journal": "Fisheries Research", "rank": 12, "total": 50, "impact_factor": 1.843}])",
      ca::TableFormat::Json);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.entries()[0].rank, 12);
  EXPECT_DOUBLE_EQ(t.entries()[0].impact_factor, 1.843);
}

TEST(RankingJson, ErrorsCarryRecordNumbers) {
  using F = ca::TableFormat;
  const std::string ok = R"({"field":"A","journal":"x","rank":1,"total":3,"impact_factor":0})";
  EXPECT_EQ(error_record("[" + ok + R"(,{"field":"A","journal":"y","rank":"2","total":3,"impact_factor":0}])", F::Json), 2u);
  EXPECT_EQ(error_record("[" + ok + R"(,{"field":"A","journal":"y","rank":2.5,"total":3,"impact_factor":0}])", F::Json), 2u);
  EXPECT_EQ(error_record("[" + ok + R"(,{"field":"A","journal":"y","rank":2,"total":3}])", F::Json), 2u);
  EXPECT_EQ(error_record("[" + ok + R"(,{"field":"A","journal":"y","rank":2,"total":3,"impact_factor":0,"x":1}])", F::Json), 2u);
  EXPECT_EQ(error_record("[" + ok + "," + ok + "]", F::Json), 2u);
  EXPECT_EQ(error_record("[" + ok + ", 7]", F::Json), 2u);
  EXPECT_THROW(ca::parse_ranking_table("{\"field\":1}", F::Json), ca::RankingParseError);
  EXPECT_THROW(ca::parse_ranking_table("[{", F::Json), ca::RankingParseError);
}

TEST(RankFractionLookup, SampleJournals) {
  const auto t = csv(
      "Geochemistry & Geophysics,Earth and Planetary Science Letters,5,80,4.724\n"
      "Fisheries,Fisheries Research,12,50,1.843\n"
      "Physics Multidisciplinary,Physica A,25,78,1.722\n");
  EXPECT_EQ(ca::rank_fraction(t, "Fisheries", "Fisheries Research").value(), 0.24);
  EXPECT_EQ(ca::rank_fraction(t, "Physics Multidisciplinary", "Physica A").value(), 25.0 / 78.0);
  EXPECT_NEAR(ca::rank_fraction(t, "Physics Multidisciplinary", "Physica A").value(), 0.320512820512, 1e-12);
  EXPECT_EQ(ca::rank_fraction(t, "Geochemistry & Geophysics", "Earth and Planetary Science Letters").value(), 0.0625);

  const auto r = ca::rank_fraction(t, "  fisheries ", "FISHERIES research");
  ASSERT_TRUE(r.quotient());
  EXPECT_EQ(r.quotient()->rank, 12);
  EXPECT_EQ(r.quotient()->total, 50);
}

TEST(RankFractionLookup, ReachesOneOnlyAtLastRank) {
  const auto t = csv("A,first,1,4,0\nA,last,4,4,0\n");
  EXPECT_EQ(ca::rank_fraction(t, "A", "last").value(), 1.0);
  EXPECT_LT(ca::rank_fraction(t, "A", "first").value(), 1.0);
}

TEST(RankFractionLookup, NotFoundListsNearMisses) {
  const auto t = csv(
      "Fisheries,Fisheries Research,12,50,1.843\n"
      "Fisheries,Reviews in Fisheries Science,3,50,2.0\n"
      "Fisheries,Aquaculture,2,50,2.0\n"
      "Oceanography,Fisheries Oceanography,4,60,2.1\n");
  try {
    ca::rank_fraction(t, "Fisheries", "fisheries");
    FAIL() << "expected JournalNotFound";
  } catch (const ca::JournalNotFound& e) {
    EXPECT_EQ(e.candidates(), (std::vector<std::string>{"Fisheries Research", "Reviews in Fisheries Science"}));
    EXPECT_NE(std::string(e.what()).find("journal not found in field"), std::string::npos);
  }
  try {
    ca::rank_fraction(t, "Botany", "Fisheries Research");
    FAIL() << "expected JournalNotFound";
  } catch (const ca::JournalNotFound& e) {
    EXPECT_TRUE(e.candidates().empty());
  }
}

TEST(RankingRoundTrip, SerializeParseIsRecordEquivalent) {
  std::mt19937_64 rng(23);
  const std::vector<std::string> words = {"Fisheries", "Physics, Applied", "Acta \"Nova\"", "Revista Física",
                                          "Letters", "A", "Journal of X", " padded "};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_real_distribution<double> impact(0.0, 60.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ca::RankingEntry> entries;
    std::uniform_int_distribution<int> rows(0, 12);
    const int n = rows(rng);
    for (int k = 0; k < n; ++k) {
      const std::string field = std::string(ca::detail::trim(words[pick(rng)])) + std::to_string(k % 3);
      const std::int64_t total = 40 + k % 3;
      ca::RankingEntry e{field, std::string(ca::detail::trim(words[pick(rng)])) + " #" + std::to_string(k),
                         1 + (k * 7) % total, total, impact(rng)};
      entries.push_back(e);
    }
    const ca::RankingTable table(entries);
    for (auto fmt : {ca::TableFormat::Csv, ca::TableFormat::Json}) {
      const auto back = ca::parse_ranking_table(ca::serialize_ranking_table(table, fmt), fmt);
      ASSERT_EQ(back.entries(), table.entries());
      EXPECT_EQ(ca::serialize_ranking_table(back, fmt), ca::serialize_ranking_table(table, fmt));
    }
  }
}
