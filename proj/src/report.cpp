#include "latalign/report.h"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_set>

#include "latalign/errors.h"
#include "latalign/text.h"

namespace latalign {
namespace {

template <class Key, class KeyOf>
std::vector<GroupSummary<Key>> GroupBy(const std::vector<FileResult> &results, KeyOf key_of) {
  std::map<Key, GroupSummary<Key>> groups;
  for (const auto &r : results) {
    auto &g = groups[key_of(r)];
    g.key = key_of(r);
    ++g.files;
    g.duration_s += r.metadata.duration_s;
    g.summary += r.summary;
  }
  std::vector<GroupSummary<Key>> out;
  for (auto &[key, g] : groups) out.push_back(std::move(g));
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.duration_s > b.duration_s; });
  return out;
}

template <class Key>
std::optional<Rational> GroupMean(const std::vector<GroupSummary<Key>> &groups) {
  std::vector<WerSummary> summaries;
  for (const auto &g : groups) summaries.push_back(g.summary);
  return MeanOfDefinedWers(summaries);
}

nlohmann::json OptionalRational(const std::optional<Rational> &value) {
  return value ? RationalJson(*value) : nlohmann::json(nullptr);
}

nlohmann::json OptionalPercent(const std::optional<Rational> &value) {
  return value ? nlohmann::json(FormatPercent(*value)) : nlohmann::json(nullptr);
}

nlohmann::json ManifestRowJson(const ManifestRow &row) {
  return {{"file_id", row.file_id},   {"ref_path", row.ref_path},     {"hyp_path", row.hyp_path},
          {"sector", row.sector},     {"sample_rate_hz", row.sample_rate_hz}, {"duration_s", row.duration_s},
          {"quarter", row.quarter},   {"num_speakers", row.num_speakers}};
}

template <class Key>
nlohmann::json GroupsJson(const std::vector<GroupSummary<Key>> &groups) {
  auto out = nlohmann::json::array();
  for (const auto &g : groups) {
    auto entry = SummaryJson(g.summary);
    entry["group"] = g.key;
    entry["files"] = g.files;
    entry["duration_s"] = g.duration_s;
    out.push_back(std::move(entry));
  }
  return out;
}

std::string CsvCount(const Rational &value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string CsvField(const std::string &raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string out = "\"";
  for (char c : raw) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

constexpr std::string_view kCsvHeader = "group,ref_count,sub,del,ins,wer_pct\n";

std::string CsvRow(const std::string &group, const WerSummary &s) {
  auto wer = s.Wer();
  return CsvField(group) + "," + CsvCount(s.ref_count) + "," + CsvCount(s.substitutions) + "," +
         CsvCount(s.deletions) + "," + CsvCount(s.insertions) + "," + (wer ? FormatPercent(*wer) : "") + "\n";
}

std::string ClassColumn(const EditOp &op, const ReferenceDocument *doc) {
  if (!doc || !op.arc_provenance) return "-";
  const auto &p = *op.arc_provenance;
  std::vector<std::string> labels;
  for (std::size_t t = p.ref_token_start; t < p.ref_token_start + p.ref_token_len && t < doc->tokens.size(); ++t) {
    const auto &entity = doc->tokens[t].entity;
    if (entity && std::find(labels.begin(), labels.end(), entity->class_label) == labels.end())
      labels.push_back(entity->class_label);
  }
  if (labels.empty()) return "-";
  std::string out;
  for (const auto &l : labels) out += (out.empty() ? "" : "+") + l;
  return out;
}

}  // namespace

ReportBuilder::ReportBuilder(AggregateOptions options) : options_(std::move(options)) {
  std::sort(options_.exclude.begin(), options_.exclude.end());
  options_.exclude.erase(std::unique(options_.exclude.begin(), options_.exclude.end()), options_.exclude.end());
}

void ReportBuilder::Add(FileResult result) {
  for (const auto &r : results_)
    if (r.file_id == result.file_id) throw DataError("duplicate file_id '" + result.file_id + "' in results");
  if (std::binary_search(options_.exclude.begin(), options_.exclude.end(), result.file_id)) return;
  results_.push_back(std::move(result));
}

StratifiedReport ReportBuilder::Build() const {
  StratifiedReport report;
  report.per_file = results_;
  report.excluded_files = options_.exclude;

  std::vector<WerSummary> summaries;
  std::vector<EntityBreakdown> breakdowns;
  for (const auto &r : results_) {
    summaries.push_back(r.summary);
    breakdowns.push_back(r.entities);
  }
  report.overall = MergeSummaries(summaries);
  report.by_entity = MergeBreakdowns(breakdowns);
  report.by_sector = GroupBy<std::string>(results_, [](const FileResult &r) { return r.metadata.sector; });
  report.by_sample_rate =
      GroupBy<std::int64_t>(results_, [](const FileResult &r) { return r.metadata.sample_rate_hz; });
  report.mean_sector_wer = GroupMean(report.by_sector);
  report.mean_sample_rate_wer = GroupMean(report.by_sample_rate);
  return report;
}

StratifiedReport Aggregate(std::vector<FileResult> results, const AggregateOptions &options) {
  std::unordered_set<std::string> seen;
  for (const auto &r : results)
    if (!seen.insert(r.file_id).second) throw DataError("duplicate file_id '" + r.file_id + "' in results");
  ReportBuilder builder(options);
  for (auto &r : results) builder.Add(std::move(r));
  return builder.Build();
}

EntityHistogram EntityDistribution(std::span<const ReferenceDocument> docs) {
  std::map<std::string, std::set<std::pair<std::string, std::int64_t>>> mentions;
  for (const auto &doc : docs)
    for (const auto &token : doc.tokens)
      if (token.entity) mentions[token.entity->class_label].emplace(doc.file_id, token.entity->span_id);

  EntityHistogram histogram;
  for (const auto &[label, spans] : mentions) histogram.counts[label] = spans.size();
  return histogram;
}

std::string RenderSideBySide(const Alignment &alignment, const ReferenceDocument *doc) {
  std::vector<std::array<std::string, 4>> rows;
  rows.reserve(alignment.ops.size());
  std::array<std::size_t, 4> width{};
  for (const auto &op : alignment.ops) {
    std::array<std::string, 4> row{op.ref_label.value_or("<ins>"), op.hyp_label.value_or("<del>"),
                                   std::string(EditKindCode(op.kind)), ClassColumn(op, doc)};
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], DisplayWidth(row[c]));
    rows.push_back(std::move(row));
  }

  std::string out;
  for (const auto &row : rows) {
    for (std::size_t c = 0; c < 3; ++c) out += row[c] + std::string(width[c] - DisplayWidth(row[c]) + 2, ' ');
    out += row[3] + "\n";
  }
  return out;
}

nlohmann::json RationalJson(const Rational &value) {
  return {{"num", value.numerator()}, {"den", value.denominator()}};
}

nlohmann::json SummaryJson(const WerSummary &summary) {
  const auto wer = summary.Wer();
  return {{"substitutions", RationalJson(summary.substitutions)},
          {"deletions", RationalJson(summary.deletions)},
          {"insertions", RationalJson(summary.insertions)},
          {"correct", RationalJson(summary.correct)},
          {"ref_count", RationalJson(summary.ref_count)},
          {"wer", OptionalRational(wer)},
          {"wer_pct", OptionalPercent(wer)}};
}

nlohmann::json BreakdownJson(const EntityBreakdown &breakdown) {
  auto per_class = nlohmann::json::object();
  for (const auto &[label, summary] : breakdown.per_class) per_class[label] = SummaryJson(summary);
  return {{"per_class", std::move(per_class)},
          {"unlabeled", SummaryJson(breakdown.unlabeled)},
          {"insertions", RationalJson(breakdown.insertions)},
          {"mean_entity_wer", OptionalRational(breakdown.mean_entity_wer)},
          {"mean_entity_wer_pct", OptionalPercent(breakdown.mean_entity_wer)}};
}

nlohmann::json FileResultJson(const FileResult &result) {
  return {{"file_id", result.file_id},
          {"summary", SummaryJson(result.summary)},
          {"entities", BreakdownJson(result.entities)},
          {"metadata", ManifestRowJson(result.metadata)}};
}

std::string RenderJson(const StratifiedReport &report) {
  auto per_file = nlohmann::json::array();
  for (const auto &r : report.per_file) per_file.push_back(FileResultJson(r));

  nlohmann::json root = {
      {"overall", SummaryJson(report.overall)},
      {"by_sector", GroupsJson(report.by_sector)},
      {"by_sample_rate", GroupsJson(report.by_sample_rate)},
      {"by_entity", BreakdownJson(report.by_entity)},
      {"per_file", std::move(per_file)},
      {"group_means",
       {{"mean_sector_wer", OptionalRational(report.mean_sector_wer)},
        {"mean_sector_wer_pct", OptionalPercent(report.mean_sector_wer)},
        {"mean_sample_rate_wer", OptionalRational(report.mean_sample_rate_wer)},
        {"mean_sample_rate_wer_pct", OptionalPercent(report.mean_sample_rate_wer)}}},
      {"excluded_files", report.excluded_files},
      {"incomplete", report.incomplete},
      {"failures", report.failures},
  };
  return root.dump(2) + "\n";
}

std::string CsvTables::Combined() const {
  return "# overall\n" + overall + "\n# sector\n" + by_sector + "\n# sample_rate\n" + by_sample_rate +
         "\n# entity\n" + by_entity;
}

CsvTables RenderCsv(const StratifiedReport &report) {
  CsvTables tables;
  tables.overall = std::string(kCsvHeader);
  if (!report.per_file.empty()) tables.overall += CsvRow("overall", report.overall);

  tables.by_sector = std::string(kCsvHeader);
  for (const auto &g : report.by_sector) tables.by_sector += CsvRow(g.key, g.summary);

  tables.by_sample_rate = std::string(kCsvHeader);
  for (const auto &g : report.by_sample_rate) tables.by_sample_rate += CsvRow(std::to_string(g.key), g.summary);

  tables.by_entity = std::string(kCsvHeader);
  for (const auto &[label, summary] : report.by_entity.per_class) tables.by_entity += CsvRow(label, summary);
  if (!report.per_file.empty()) tables.by_entity += CsvRow("(unlabeled)", report.by_entity.unlabeled);
  return tables;
}

std::string RenderHistogramCsv(const EntityHistogram &histogram) {
  std::vector<std::pair<std::string, std::size_t>> rows(histogram.counts.begin(), histogram.counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) { return a.second > b.second; });
  std::string out = "class,count\n";
  for (const auto &[label, count] : rows) out += CsvField(label) + "," + std::to_string(count) + "\n";
  return out;
}

}  // namespace latalign
