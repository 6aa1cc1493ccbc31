#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace latalign {

/// Header line of every .nlp file.
inline constexpr std::string_view kNlpHeader = "token|speaker|ts|endTs|punct|case|tags|wer_tags";

inline constexpr std::string_view kManifestHeader =
    "file_id,ref_path,hyp_path,sector,sample_rate_hz,duration_s,quarter,num_speakers";

enum class Casing { kLower, kUpper, kCapitalized };

std::string_view CasingCode(Casing casing);

/// Seconds plus the exact spelling it was read from, so files round-trip
/// byte-for-byte ("0.50" stays "0.50").
struct Timestamp {
  double seconds = 0.0;
  std::string text;

  static Timestamp FromSeconds(double seconds);
  friend bool operator==(const Timestamp &, const Timestamp &) = default;
};

struct EntitySpanRef {
  std::string class_label;
  std::int64_t span_id = 0;

  friend bool operator==(const EntitySpanRef &, const EntitySpanRef &) = default;
};

struct NlpToken {
  std::string text;
  std::string speaker;
  std::optional<Timestamp> start;
  std::optional<Timestamp> end;
  std::string punct;
  Casing casing = Casing::kLower;
  std::optional<EntitySpanRef> entity;
  std::optional<std::string> norm_id;

  friend bool operator==(const NlpToken &, const NlpToken &) = default;
};

/// A normalization candidate: non-empty list of comparison-form tokens.
using Candidate = std::vector<std::string>;

struct ReferenceDocument {
  std::string file_id;
  std::vector<NlpToken> tokens;
  std::map<std::string, std::vector<Candidate>> norms;
};

enum class TokenSource { kPlainText, kCtm, kNlpDerived };

struct TokenSequence {
  std::vector<std::string> tokens;
  TokenSource source = TokenSource::kPlainText;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const std::string &operator[](std::size_t i) const { return tokens[i]; }
};

struct ManifestRow {
  std::string file_id;
  std::string ref_path;
  std::string hyp_path;
  std::string sector;
  std::int64_t sample_rate_hz = 0;
  double duration_s = 0.0;
  std::string quarter;
  std::int64_t num_speakers = 0;

  friend bool operator==(const ManifestRow &, const ManifestRow &) = default;
};

struct CorpusManifest {
  std::vector<ManifestRow> rows;
};

/// Parses the pipe-separated reference format. `source_name` prefixes error
/// messages; every malformed line is reported with its 1-based line number.
/// Norms start empty; see AttachNormSidecar.
ReferenceDocument ParseNlp(std::string_view text, std::string file_id = {}, const std::string &source_name = {});

/// Inverse of ParseNlp: header plus one LF-terminated line per token.
std::string SerializeNlp(const ReferenceDocument &doc);

/// Loads `{"norm_id": ["candidate one", ...]}` into doc.norms. Candidates are
/// whitespace-tokenized into comparison form and deduplicated. Every norm_id a
/// token references must be present.
ReferenceDocument AttachNormSidecar(ReferenceDocument doc, std::string_view json_text,
                                    const std::string &source_name = {});

TokenSequence ParseHypothesisText(std::string_view text, const std::string &source_name = {});

/// CTM lines `<recording> <channel> <start> <dur> <token> [conf]`, ordered by
/// start time (stable). `;;` lines and blank lines are skipped.
TokenSequence ParseCtm(std::string_view text, const std::string &source_name = {});

CorpusManifest ParseManifest(std::string_view text, const std::string &source_name = {});

/// Comparison forms of the verbatim tokens in order. Tokens that fold to
/// nothing (a bare "." for instance) are omitted.
TokenSequence ReferenceTokenSequence(const ReferenceDocument &doc);

}  // namespace latalign
