#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "latalign/aligner.h"
#include "latalign/nlp_format.h"
#include "latalign/scoring.h"

namespace latalign {

struct FileResult {
  std::string file_id;
  WerSummary summary;
  EntityBreakdown entities;
  ManifestRow metadata;
};

template <class Key>
struct GroupSummary {
  Key key{};
  std::size_t files = 0;
  double duration_s = 0.0;
  WerSummary summary;
};

struct StratifiedReport {
  WerSummary overall;
  /// Display order: descending total duration, then key.
  std::vector<GroupSummary<std::string>> by_sector;
  std::vector<GroupSummary<std::int64_t>> by_sample_rate;
  EntityBreakdown by_entity;
  std::vector<FileResult> per_file;
  /// Unweighted means of group micro-WERs (groups with ref_count > 0).
  std::optional<Rational> mean_sector_wer;
  std::optional<Rational> mean_sample_rate_wer;
  std::vector<std::string> excluded_files;
  bool incomplete = false;
  std::vector<std::string> failures;
};

struct AggregateOptions {
  std::vector<std::string> exclude;
};

/// Incremental form of Aggregate: Add in any batching, Build gives the same
/// report as one Aggregate call over the same sequence.
class ReportBuilder {
 public:
  explicit ReportBuilder(AggregateOptions options = {});

  /// Throws DataError on a repeated file_id. Excluded ids are dropped.
  void Add(FileResult result);
  StratifiedReport Build() const;

 private:
  AggregateOptions options_;
  std::vector<FileResult> results_;
};

StratifiedReport Aggregate(std::vector<FileResult> results, const AggregateOptions &options = {});

struct EntityHistogram {
  /// class -> number of distinct (file_id, span_id) mentions
  std::map<std::string, std::size_t> counts;
};

EntityHistogram EntityDistribution(std::span<const ReferenceDocument> docs);

/// One op per line: REF HYP OP CLASS in padded columns. `doc` supplies entity
/// classes; without it the class column is "-".
std::string RenderSideBySide(const Alignment &alignment, const ReferenceDocument *doc = nullptr);

nlohmann::json RationalJson(const Rational &value);
nlohmann::json SummaryJson(const WerSummary &summary);
nlohmann::json BreakdownJson(const EntityBreakdown &breakdown);
nlohmann::json FileResultJson(const FileResult &result);

/// Canonical JSON: sorted keys, 2-space indent, trailing newline.
std::string RenderJson(const StratifiedReport &report);

struct CsvTables {
  std::string overall;
  std::string by_sector;
  std::string by_sample_rate;
  std::string by_entity;

  /// All tables in one file, each introduced by a `# name` line.
  std::string Combined() const;
};

CsvTables RenderCsv(const StratifiedReport &report);

/// `class,count`, by descending count then class name.
std::string RenderHistogramCsv(const EntityHistogram &histogram);

}  // namespace latalign
