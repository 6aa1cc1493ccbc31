#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <boost/rational.hpp>

#include "latalign/aligner.h"
#include "latalign/nlp_format.h"

namespace latalign {

/// Counts are rational because entity buckets receive fractional shares of
/// ops whose arcs span several reference tokens.
using Rational = boost::rational<std::int64_t>;

struct WerSummary {
  Rational substitutions{0};
  Rational deletions{0};
  Rational insertions{0};
  Rational correct{0};
  Rational ref_count{0};

  Rational Errors() const { return substitutions + deletions + insertions; }
  /// Undefined when ref_count is zero.
  std::optional<Rational> Wer() const;

  WerSummary &operator+=(const WerSummary &other);
  friend bool operator==(const WerSummary &, const WerSummary &) = default;
};

struct EntityBreakdown {
  std::map<std::string, WerSummary> per_class;
  WerSummary unlabeled;
  /// Insertions belong to the document, never to a class.
  Rational insertions{0};
  /// Unweighted mean of per-class WERs over classes with ref_count > 0.
  std::optional<Rational> mean_entity_wer;

  friend bool operator==(const EntityBreakdown &, const EntityBreakdown &) = default;
};

/// Tallies ops; the denominator is the length of the chosen reference path.
WerSummary Summarize(const Alignment &alignment);

/// Attributes every Correct/Substitution/Deletion op to the original tokens
/// its arc stands for, 1/k to each of the k spanned tokens. Throws DataError
/// on provenance outside the document.
EntityBreakdown ComputeEntityBreakdown(const Alignment &alignment, const ReferenceDocument &doc);

/// Fieldwise sums (micro-average).
WerSummary MergeSummaries(std::span<const WerSummary> summaries);
EntityBreakdown MergeBreakdowns(std::span<const EntityBreakdown> breakdowns);

/// Unweighted mean of the defined WERs; nullopt when none is defined.
std::optional<Rational> MeanOfDefinedWers(std::span<const WerSummary> summaries);

/// Percent rounded half-even to one decimal: 113/1000 -> "11.3".
std::string FormatPercent(const Rational &ratio);

}  // namespace latalign
