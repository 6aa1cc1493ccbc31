#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "latalign/nlp_format.h"

namespace latalign {

/// Symmetric equivalence between two comparison-form token sequences.
struct TransformRule {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;

  friend bool operator==(const TransformRule &, const TransformRule &) = default;
};

enum class RuleSide { kLhs, kRhs };

struct RuleMatch {
  std::size_t rule = 0;  // index into TransformRuleSet::rules()
  RuleSide side = RuleSide::kLhs;
  std::size_t length = 0;

  friend bool operator==(const RuleMatch &, const RuleMatch &) = default;
};

class TransformRuleSet {
 public:
  TransformRuleSet() = default;

  /// Validates each rule (non-empty sides, no whitespace, lhs != rhs) and
  /// drops duplicates; (a, b) and (b, a) count as the same rule.
  explicit TransformRuleSet(std::vector<TransformRule> rules);

  const std::vector<TransformRule> &rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }

  /// Indices of rules whose lhs or rhs begins with `token`, ascending.
  std::span<const std::size_t> RulesStartingWith(const std::string &token) const;

  /// Equality ignoring rule order and orientation.
  bool Equivalent(const TransformRuleSet &other) const;

 private:
  std::vector<TransformRule> rules_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;
};

/// One `lhs|rhs` rule per line; `#` lines and blank lines are ignored.
TransformRuleSet ParseSynonyms(std::string_view text, const std::string &source_name = {});

std::string SerializeSynonyms(const TransformRuleSet &rules);

/// Every (rule, side) whose token sequence equals tokens[i, i + length).
/// Ordered by rule index, lhs before rhs.
std::vector<RuleMatch> MatchesAt(const TransformRuleSet &rules, std::span<const std::string> tokens, std::size_t i);

inline std::vector<RuleMatch> MatchesAt(const TransformRuleSet &rules, const TokenSequence &tokens, std::size_t i) {
  return MatchesAt(rules, std::span<const std::string>(tokens.tokens), i);
}

struct CoverageStats {
  std::size_t tokens_total = 0;
  std::size_t tokens_with_norm_candidates = 0;
  std::size_t tokens_covered_by_synonym_match = 0;
  double fraction_norm = 0.0;
  double fraction_syn = 0.0;
};

/// Share of reference tokens carrying a normalization id, and share lying
/// inside at least one synonym match span.
CoverageStats TransformCoverageStats(std::span<const ReferenceDocument> docs, const TransformRuleSet &rules);

}  // namespace latalign
