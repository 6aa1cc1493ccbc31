#include "latalign/nlp_format.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "latalign/errors.h"
#include "latalign/text.h"

namespace latalign {
namespace {

std::optional<double> ParseFiniteDouble(std::string_view s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

template <class Int>
std::optional<Int> ParseInteger(std::string_view s) {
  Int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

/// Splits into lines on LF. A trailing LF does not open an extra empty line.
std::vector<std::string_view> SplitLines(std::string_view text) {
  auto lines = SplitFields(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::optional<Casing> ParseCasing(std::string_view code) {
  if (code == "LC") return Casing::kLower;
  if (code == "UC") return Casing::kUpper;
  if (code == "CA") return Casing::kCapitalized;
  return std::nullopt;
}

Timestamp ParseTimestamp(std::string_view field, const std::string &source, std::size_t line, const char *name) {
  auto seconds = ParseFiniteDouble(field);
  if (!seconds) throw ParseError(source, line, std::string("non-numeric ") + name + " '" + std::string(field) + "'");
  if (*seconds < 0) throw ParseError(source, line, std::string("negative ") + name + " '" + std::string(field) + "'");
  return Timestamp{*seconds, std::string(field)};
}

EntitySpanRef ParseEntityTag(std::string_view field, const std::string &source, std::size_t line) {
  auto colon = field.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw ParseError(source, line, "entity tag '" + std::string(field) + "' is not CLASS:span_id");
  auto span = ParseInteger<std::int64_t>(field.substr(colon + 1));
  if (!span || *span < 0)
    throw ParseError(source, line, "entity tag '" + std::string(field) + "' has an invalid span id");
  return EntitySpanRef{std::string(field.substr(0, colon)), *span};
}

/// Minimal RFC 4180 field splitter: double-quoted fields may contain commas
/// and doubled quotes.
std::optional<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool field_started_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && current.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      field_started_quoted = false;
    } else {
      current += c;
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(current));
  return fields;
}

std::string_view StripCr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string_view CasingCode(Casing casing) {
  switch (casing) {
    case Casing::kLower:
      return "LC";
    case Casing::kUpper:
      return "UC";
    case Casing::kCapitalized:
      return "CA";
  }
  return "LC";
}

Timestamp Timestamp::FromSeconds(double seconds) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), seconds);
  return Timestamp{seconds, std::string(buffer, ptr)};
}

ReferenceDocument ParseNlp(std::string_view text, std::string file_id, const std::string &source_name) {
  auto lines = SplitLines(text);
  if (lines.empty()) throw ParseError(source_name, 1, "missing header");
  if (lines[0] != kNlpHeader)
    throw ParseError(source_name, 1, "malformed header, expected '" + std::string(kNlpHeader) + "'");

  ReferenceDocument doc;
  doc.file_id = std::move(file_id);
  doc.tokens.reserve(lines.size() - 1);

  // span_id -> (class, index of the latest token in that span)
  std::unordered_map<std::int64_t, std::pair<std::string, std::size_t>> spans;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (!IsValidUtf8(line)) throw ParseError(source_name, line_no, "invalid UTF-8");
    auto fields = SplitFields(line, '|');
    if (fields.size() != 8)
      throw ParseError(source_name, line_no, "expected 8 fields, found " + std::to_string(fields.size()));

    NlpToken token;
    if (fields[0].empty()) throw ParseError(source_name, line_no, "empty token");
    token.text = fields[0];
    token.speaker = fields[1];
    if (!fields[2].empty()) token.start = ParseTimestamp(fields[2], source_name, line_no, "ts");
    if (!fields[3].empty()) token.end = ParseTimestamp(fields[3], source_name, line_no, "endTs");
    if (token.start && token.end && token.start->seconds > token.end->seconds)
      throw ParseError(source_name, line_no, "ts is after endTs");
    token.punct = fields[4];

    auto casing = ParseCasing(fields[5]);
    if (!casing) throw ParseError(source_name, line_no, "invalid casing code '" + std::string(fields[5]) + "'");
    token.casing = *casing;
    if (token.casing == Casing::kUpper && HasLowercase(token.text))
      throw ParseError(source_name, line_no, "casing UC but token '" + token.text + "' has lowercase letters");

    if (!fields[6].empty()) {
      auto entity = ParseEntityTag(fields[6], source_name, line_no);
      const std::size_t index = doc.tokens.size();
      auto [it, inserted] = spans.try_emplace(entity.span_id, entity.class_label, index);
      if (!inserted) {
        if (it->second.first != entity.class_label)
          throw ParseError(source_name, line_no,
                           "span " + std::to_string(entity.span_id) + " mixes classes " + it->second.first + " and " +
                               entity.class_label);
        if (it->second.second + 1 != index)
          throw ParseError(source_name, line_no, "span " + std::to_string(entity.span_id) + " is not contiguous");
        it->second.second = index;
      }
      token.entity = std::move(entity);
    }
    if (!fields[7].empty()) token.norm_id = std::string(fields[7]);

    doc.tokens.push_back(std::move(token));
  }
  return doc;
}

std::string SerializeNlp(const ReferenceDocument &doc) {
  std::string out(kNlpHeader);
  out += '\n';
  for (const auto &t : doc.tokens) {
    out += t.text;
    out += '|';
    out += t.speaker;
    out += '|';
    if (t.start) out += t.start->text.empty() ? Timestamp::FromSeconds(t.start->seconds).text : t.start->text;
    out += '|';
    if (t.end) out += t.end->text.empty() ? Timestamp::FromSeconds(t.end->seconds).text : t.end->text;
    out += '|';
    out += t.punct;
    out += '|';
    out += CasingCode(t.casing);
    out += '|';
    if (t.entity) out += t.entity->class_label + ":" + std::to_string(t.entity->span_id);
    out += '|';
    if (t.norm_id) out += *t.norm_id;
    out += '\n';
  }
  return out;
}

ReferenceDocument AttachNormSidecar(ReferenceDocument doc, std::string_view json_text,
                                    const std::string &source_name) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(source_name, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError(source_name, 0, "normalization sidecar must be a JSON object");

  std::map<std::string, std::vector<Candidate>> norms;
  for (const auto &[norm_id, candidates] : root.items()) {
    if (!candidates.is_array())
      throw ParseError(source_name, 0, "norm '" + norm_id + "' must map to an array of strings");
    std::vector<Candidate> parsed;
    std::set<Candidate> seen;
    for (const auto &candidate : candidates) {
      if (!candidate.is_string())
        throw ParseError(source_name, 0, "norm '" + norm_id + "' has a non-string candidate");
      const auto &raw = candidate.get_ref<const std::string &>();
      if (!IsValidUtf8(raw)) throw ParseError(source_name, 0, "norm '" + norm_id + "' has invalid UTF-8");
      Candidate tokens;
      for (auto piece : SplitWhitespace(raw)) {
        auto folded = ComparisonForm(piece);
        if (!folded.empty()) tokens.push_back(std::move(folded));
      }
      if (tokens.empty()) throw ParseError(source_name, 0, "norm '" + norm_id + "' has an empty candidate");
      if (seen.insert(tokens).second) parsed.push_back(std::move(tokens));
    }
    norms.emplace(norm_id, std::move(parsed));
  }

  for (const auto &token : doc.tokens) {
    if (token.norm_id && !norms.contains(*token.norm_id))
      throw DataError((source_name.empty() ? std::string("<sidecar>") : source_name) + ": norm_id '" +
                      *token.norm_id + "' referenced by token '" + token.text + "' is missing");
  }
  doc.norms = std::move(norms);
  return doc;
}

TokenSequence ParseHypothesisText(std::string_view text, const std::string &source_name) {
  if (!IsValidUtf8(text)) throw ParseError(source_name, 0, "invalid UTF-8");
  TokenSequence seq;
  seq.source = TokenSource::kPlainText;
  for (auto piece : SplitWhitespace(text)) {
    auto folded = ComparisonForm(piece);
    if (!folded.empty()) seq.tokens.push_back(std::move(folded));
  }
  return seq;
}

TokenSequence ParseCtm(std::string_view text, const std::string &source_name) {
  struct Entry {
    double start;
    std::string token;
  };
  std::vector<Entry> entries;
  auto lines = SplitLines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (!IsValidUtf8(lines[i])) throw ParseError(source_name, line_no, "invalid UTF-8");
    auto fields = SplitWhitespace(lines[i]);
    if (fields.empty() || fields[0].starts_with(";;")) continue;
    if (fields.size() < 5)
      throw ParseError(source_name, line_no, "expected at least 5 fields, found " + std::to_string(fields.size()));
    auto start = ParseFiniteDouble(fields[2]);
    if (!start) throw ParseError(source_name, line_no, "non-numeric start '" + std::string(fields[2]) + "'");
    if (!ParseFiniteDouble(fields[3]))
      throw ParseError(source_name, line_no, "non-numeric duration '" + std::string(fields[3]) + "'");
    auto folded = ComparisonForm(fields[4]);
    if (!folded.empty()) entries.push_back({*start, std::move(folded)});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) { return a.start < b.start; });

  TokenSequence seq;
  seq.source = TokenSource::kCtm;
  seq.tokens.reserve(entries.size());
  for (auto &e : entries) seq.tokens.push_back(std::move(e.token));
  return seq;
}

CorpusManifest ParseManifest(std::string_view text, const std::string &source_name) {
  auto lines = SplitLines(text);
  if (lines.empty() || StripCr(lines[0]) != kManifestHeader)
    throw ParseError(source_name, 1, "malformed header, expected '" + std::string(kManifestHeader) + "'");

  CorpusManifest manifest;
  std::unordered_set<std::string> ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = StripCr(lines[i]);
    if (line.empty()) continue;
    auto fields = SplitCsvLine(line);
    if (!fields) throw ParseError(source_name, line_no, "unterminated quoted field");
    if (fields->size() != 8)
      throw ParseError(source_name, line_no, "expected 8 fields, found " + std::to_string(fields->size()));
    auto &f = *fields;

    ManifestRow row;
    row.file_id = f[0];
    if (row.file_id.empty()) throw ParseError(source_name, line_no, "empty file_id");
    row.ref_path = f[1];
    row.hyp_path = f[2];
    row.sector = f[3];
    auto rate = ParseInteger<std::int64_t>(f[4]);
    if (!rate || *rate <= 0) throw ParseError(source_name, line_no, "sample_rate_hz must be a positive integer");
    row.sample_rate_hz = *rate;
    auto duration = ParseFiniteDouble(f[5]);
    if (!duration || *duration <= 0) throw ParseError(source_name, line_no, "duration_s must be a positive number");
    row.duration_s = *duration;
    row.quarter = f[6];
    auto speakers = ParseInteger<std::int64_t>(f[7]);
    if (!speakers || *speakers <= 0) throw ParseError(source_name, line_no, "num_speakers must be a positive integer");
    row.num_speakers = *speakers;

    if (!ids.insert(row.file_id).second)
      throw ParseError(source_name, line_no, "duplicate file_id '" + row.file_id + "'");
    manifest.rows.push_back(std::move(row));
  }
  return manifest;
}

TokenSequence ReferenceTokenSequence(const ReferenceDocument &doc) {
  TokenSequence seq;
  seq.source = TokenSource::kNlpDerived;
  seq.tokens.reserve(doc.tokens.size());
  for (const auto &t : doc.tokens) {
    auto folded = ComparisonForm(t.text);
    if (!folded.empty()) seq.tokens.push_back(std::move(folded));
  }
  return seq;
}

}  // namespace latalign
