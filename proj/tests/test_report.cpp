#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "generators.h"
#include "latalign/errors.h"
#include "latalign/lattice.h"
#include "latalign/report.h"
#include "latalign/transforms.h"

using namespace latalign;

namespace {

TokenSequence Seq(std::vector<std::string> tokens) { return TokenSequence{std::move(tokens), TokenSource::kPlainText}; }

ReferenceDocument Doc(std::vector<std::string> words) {
  ReferenceDocument doc;
  for (auto &w : words) doc.tokens.push_back(NlpToken{.text = w});
  return doc;
}

FileResult Result(std::string id, std::string sector, std::int64_t rate, double duration, std::int64_t errors,
                  std::int64_t n) {
  FileResult r;
  r.file_id = id;
  r.summary.substitutions = errors;
  r.summary.ref_count = n;
  r.summary.correct = n - errors;
  r.metadata = ManifestRow{id, id + ".nlp", id + ".txt", std::move(sector), rate, duration, "Q1", 2};
  return r;
}

}  // namespace

TEST(Aggregate, SameSectorMerges) {
  auto report = Aggregate({Result("1", "Technology", 44100, 10, 1, 10), Result("2", "Technology", 44100, 20, 3, 30)});
  ASSERT_EQ(report.by_sector.size(), 1u);
  EXPECT_EQ(report.by_sector[0].summary, report.overall);
  EXPECT_EQ(report.by_sector[0].files, 2u);
  EXPECT_EQ(*report.overall.Wer(), Rational(4, 40));
}

TEST(Aggregate, RatesFormSeparateGroups) {
  auto report = Aggregate({Result("1", "Technology", 44100, 10, 1, 10), Result("2", "Financial", 16000, 20, 3, 30)});
  ASSERT_EQ(report.by_sample_rate.size(), 2u);
  // longer total duration first
  EXPECT_EQ(report.by_sample_rate[0].key, 16000);
  EXPECT_EQ(report.by_sample_rate[1].key, 44100);
  // unweighted mean of 1/10 and 1/10
  EXPECT_EQ(*report.mean_sample_rate_wer, Rational(1, 10));
}

TEST(Aggregate, GroupMeanDiffersFromMicroAverage) {
  auto report = Aggregate({Result("1", "A", 16000, 1, 1, 2), Result("2", "B", 16000, 1, 0, 8)});
  EXPECT_EQ(*report.overall.Wer(), Rational(1, 10));
  EXPECT_EQ(*report.mean_sector_wer, Rational(1, 4));
}

TEST(Aggregate, Empty) {
  auto report = Aggregate({});
  EXPECT_FALSE(report.overall.Wer());
  EXPECT_TRUE(report.by_sector.empty());
  EXPECT_FALSE(report.mean_sector_wer);
}

TEST(Aggregate, DuplicateIdsRejected) {
  EXPECT_THROW(Aggregate({Result("1", "A", 1, 1, 0, 1), Result("1", "A", 1, 1, 0, 1)}), DataError);
}

TEST(Aggregate, ExclusionDropsFileAndIsRecorded) {
  auto report = Aggregate({Result("4346923", "Industrial Goods", 16000, 10, 9, 10), Result("2", "A", 16000, 5, 0, 10)},
                          AggregateOptions{{"4346923"}});
  EXPECT_EQ(report.per_file.size(), 1u);
  EXPECT_EQ(report.excluded_files, (std::vector<std::string>{"4346923"}));
  EXPECT_EQ(*report.overall.Wer(), Rational(0));
}

TEST(Aggregate, PartitionAndIncrementalConsistency) {
  std::mt19937 rng(5);
  const std::vector<std::string> sectors{"Technology", "Financial", "Utilities", "Healthcare"};
  const std::vector<std::int64_t> rates{44100, 24000, 22050, 16000, 11025};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FileResult> results;
    for (std::size_t f = gen::Uniform(rng, 0, 12); f > 0; --f) {
      auto n = static_cast<std::int64_t>(gen::Uniform(rng, 0, 50));
      auto e = static_cast<std::int64_t>(gen::Uniform(rng, 0, static_cast<std::size_t>(n)));
      results.push_back(Result(std::to_string(f), sectors[gen::Uniform(rng, 0, 3)], rates[gen::Uniform(rng, 0, 4)],
                               static_cast<double>(gen::Uniform(rng, 1, 100)), e, n));
      results.back().summary.insertions = static_cast<std::int64_t>(gen::Uniform(rng, 0, 3));
    }
    auto report = Aggregate(results);
    WerSummary by_sector, by_rate;
    for (const auto &g : report.by_sector) by_sector += g.summary;
    for (const auto &g : report.by_sample_rate) by_rate += g.summary;
    EXPECT_EQ(by_sector, report.overall);
    EXPECT_EQ(by_rate, report.overall);

    ReportBuilder builder;
    for (const auto &r : results) builder.Add(r);
    EXPECT_EQ(RenderJson(builder.Build()), RenderJson(report));
  }
}

TEST(EntityDistribution, CountsMentionsNotTokens) {
  auto doc = Doc({"new", "york", "is", "big"});
  doc.file_id = "f";
  doc.tokens[0].entity = EntitySpanRef{"GPE", 3};
  doc.tokens[1].entity = EntitySpanRef{"GPE", 3};
  std::vector<ReferenceDocument> docs{doc};
  EXPECT_EQ(EntityDistribution(docs).counts, (std::map<std::string, std::size_t>{{"GPE", 1}}));
}

TEST(EntityDistribution, AcrossDocsAndOrderInvariant) {
  auto a = Doc({"alice"}), b = Doc({"bob"}), c = Doc({"none"});
  a.file_id = "a";
  b.file_id = "b";
  c.file_id = "c";
  a.tokens[0].entity = EntitySpanRef{"PERSON", 1};
  b.tokens[0].entity = EntitySpanRef{"PERSON", 1};
  std::vector<ReferenceDocument> forward{a, b, c}, backward{c, b, a};
  EXPECT_EQ(EntityDistribution(forward).counts.at("PERSON"), 2u);
  EXPECT_EQ(EntityDistribution(forward).counts, EntityDistribution(backward).counts);
  std::vector<ReferenceDocument> plain{c};
  EXPECT_TRUE(EntityDistribution(plain).counts.empty());
}

TEST(RenderSideBySide, AllCorrect) {
  auto ref = Seq({"good", "morning"});
  EXPECT_EQ(RenderSideBySide(LevenshteinAlign(ref, ref)),
            "good     good     C  -\n"
            "morning  morning  C  -\n");
}

TEST(RenderSideBySide, GonnaShowsSynonymLabel) {
  auto doc = Doc({"I'm", "going", "to", "win"});
  auto a = Align(BuildLattice(doc, ParseSynonyms("going to|gonna\n")), Seq({"i'm", "gonna", "win"}));
  auto text = RenderSideBySide(a, &doc);
  EXPECT_NE(text.find("gonna  gonna  C"), std::string::npos) << text;
}

TEST(RenderSideBySide, DeletionInsertionAndClasses) {
  auto doc = Doc({"acme", "corp"});
  doc.tokens[0].entity = EntitySpanRef{"ORG", 1};
  doc.tokens[1].entity = EntitySpanRef{"ORG", 1};
  auto a = Align(BuildLattice(doc, {}), Seq({"acme", "x", "y"}));
  EXPECT_EQ(RenderSideBySide(a, &doc),
            "acme   acme  C  ORG\n"
            "<ins>  x     I  -\n"
            "corp   y     S  ORG\n");
  auto d = Align(BuildLattice(doc, {}), Seq({}));
  EXPECT_EQ(RenderSideBySide(d, &doc), "acme  <del>  D  ORG\ncorp  <del>  D  ORG\n");
}

TEST(RenderSideBySide, Empty) { EXPECT_EQ(RenderSideBySide(Alignment{}), ""); }

TEST(RenderJson, PercentAndNulls) {
  auto report = Aggregate({Result("1", "S", 16000, 1, 113, 1000)});
  auto json = nlohmann::json::parse(RenderJson(report));
  EXPECT_EQ(json["overall"]["wer_pct"], "11.3");
  EXPECT_EQ(json["overall"]["wer"]["num"], 113);
  EXPECT_EQ(json["overall"]["wer"]["den"], 1000);
  for (const char *key : {"overall", "by_sector", "by_sample_rate", "by_entity", "per_file", "group_means",
                          "excluded_files"})
    EXPECT_TRUE(json.contains(key)) << key;

  auto empty = nlohmann::json::parse(RenderJson(Aggregate({})));
  EXPECT_TRUE(empty["overall"]["wer_pct"].is_null());
  EXPECT_TRUE(empty["overall"]["wer"].is_null());
}

TEST(RenderJson, ByteStable) {
  auto results = std::vector<FileResult>{Result("1", "S", 16000, 1, 1, 7), Result("2", "T", 44100, 3, 2, 9)};
  EXPECT_EQ(RenderJson(Aggregate(results)), RenderJson(Aggregate(results)));
}

TEST(RenderCsv, Tables) {
  auto report = Aggregate({Result("1", "Technology", 16000, 1, 1, 10), Result("2", "Financial", 44100, 3, 2, 20)});
  auto csv = RenderCsv(report);
  EXPECT_EQ(csv.by_sector,
            "group,ref_count,sub,del,ins,wer_pct\n"
            "Financial,20,2,0,0,10.0\n"
            "Technology,10,1,0,0,10.0\n");
  EXPECT_EQ(std::count(csv.by_sector.begin(), csv.by_sector.end(), '\n'), 3);
  EXPECT_EQ(csv.overall, "group,ref_count,sub,del,ins,wer_pct\noverall,30,3,0,0,10.0\n");

  auto empty = RenderCsv(Aggregate({}));
  EXPECT_EQ(empty.by_sector, "group,ref_count,sub,del,ins,wer_pct\n");
  EXPECT_EQ(empty.overall, "group,ref_count,sub,del,ins,wer_pct\n");
  EXPECT_EQ(empty.by_entity, "group,ref_count,sub,del,ins,wer_pct\n");
}

TEST(RenderHistogramCsv, OrderedByCountThenName) {
  EntityHistogram h;
  h.counts = {{"ORG", 3}, {"DATE", 5}, {"CARDINAL", 3}};
  EXPECT_EQ(RenderHistogramCsv(h), "class,count\nDATE,5\nCARDINAL,3\nORG,3\n");
  EXPECT_EQ(RenderHistogramCsv({}), "class,count\n");
}
