#include "latalign/scoring.h"

#include <vector>

#include "latalign/errors.h"

namespace latalign {
namespace {

void Bump(WerSummary &bucket, EditKind kind, const Rational &weight) {
  switch (kind) {
    case EditKind::kCorrect:
      bucket.correct += weight;
      break;
    case EditKind::kSubstitution:
      bucket.substitutions += weight;
      break;
    case EditKind::kDeletion:
      bucket.deletions += weight;
      break;
    case EditKind::kInsertion:
      bucket.insertions += weight;
      return;
  }
  bucket.ref_count += weight;
}

std::optional<Rational> MeanEntityWer(const std::map<std::string, WerSummary> &per_class) {
  std::vector<WerSummary> classes;
  classes.reserve(per_class.size());
  for (const auto &[label, summary] : per_class) classes.push_back(summary);
  return MeanOfDefinedWers(classes);
}

}  // namespace

std::optional<Rational> WerSummary::Wer() const {
  if (ref_count.numerator() == 0) return std::nullopt;
  return Errors() / ref_count;
}

WerSummary &WerSummary::operator+=(const WerSummary &other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  correct += other.correct;
  ref_count += other.ref_count;
  return *this;
}

WerSummary Summarize(const Alignment &alignment) {
  WerSummary summary;
  for (const auto &op : alignment.ops) Bump(summary, op.kind, Rational(1));
  summary.ref_count = Rational(static_cast<std::int64_t>(alignment.best_path_ref_len));
  return summary;
}

EntityBreakdown ComputeEntityBreakdown(const Alignment &alignment, const ReferenceDocument &doc) {
  EntityBreakdown breakdown;
  for (const auto &op : alignment.ops) {
    if (op.kind == EditKind::kInsertion) {
      breakdown.insertions += 1;
      continue;
    }
    if (!op.arc_provenance) throw DataError("alignment op without provenance");
    const auto &p = *op.arc_provenance;
    if (p.ref_token_len == 0 || p.ref_token_start + p.ref_token_len > doc.tokens.size())
      throw DataError("alignment provenance [" + std::to_string(p.ref_token_start) + ", +" +
                      std::to_string(p.ref_token_len) + ") is outside a " + std::to_string(doc.tokens.size()) +
                      "-token document");
    const Rational share(1, static_cast<std::int64_t>(p.ref_token_len));
    for (std::size_t t = p.ref_token_start; t < p.ref_token_start + p.ref_token_len; ++t) {
      const auto &entity = doc.tokens[t].entity;
      Bump(entity ? breakdown.per_class[entity->class_label] : breakdown.unlabeled, op.kind, share);
    }
  }
  breakdown.mean_entity_wer = MeanEntityWer(breakdown.per_class);
  return breakdown;
}

WerSummary MergeSummaries(std::span<const WerSummary> summaries) {
  WerSummary merged;
  for (const auto &s : summaries) merged += s;
  return merged;
}

EntityBreakdown MergeBreakdowns(std::span<const EntityBreakdown> breakdowns) {
  EntityBreakdown merged;
  for (const auto &b : breakdowns) {
    for (const auto &[label, summary] : b.per_class) merged.per_class[label] += summary;
    merged.unlabeled += b.unlabeled;
    merged.insertions += b.insertions;
  }
  merged.mean_entity_wer = MeanEntityWer(merged.per_class);
  return merged;
}

std::optional<Rational> MeanOfDefinedWers(std::span<const WerSummary> summaries) {
  Rational total(0);
  std::int64_t count = 0;
  for (const auto &s : summaries) {
    if (auto wer = s.Wer()) {
      total += *wer;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return total / count;
}

std::string FormatPercent(const Rational &ratio) {
  __extension__ using Wide = __int128;
  // tenths of a percent: ratio * 1000, rounded half to even
  const Wide num = static_cast<Wide>(ratio.numerator()) * 1000;
  const Wide den = ratio.denominator();
  const bool negative = num < 0;
  const Wide abs_num = negative ? -num : num;
  Wide q = abs_num / den;
  const Wide twice_rem = 2 * (abs_num - q * den);
  if (twice_rem > den || (twice_rem == den && (q % 2) == 1)) ++q;

  const auto whole = static_cast<long long>(q / 10);
  const auto tenth = static_cast<int>(q % 10);
  std::string out = (negative && q != 0) ? "-" : "";
  return out + std::to_string(whole) + "." + std::to_string(tenth);
}

}  // namespace latalign
