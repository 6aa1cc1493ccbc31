#include "latalign/transforms.h"

#include <algorithm>
#include <set>

#include "latalign/errors.h"
#include "latalign/text.h"

namespace latalign {
namespace {

using Side = std::vector<std::string>;

std::pair<Side, Side> CanonicalKey(const TransformRule &rule) {
  return rule.lhs < rule.rhs ? std::make_pair(rule.lhs, rule.rhs) : std::make_pair(rule.rhs, rule.lhs);
}

bool HasWhitespace(const std::string &token) {
  return token.empty() || token.find_first_of(" \t\n\r\v\f") != std::string::npos;
}

std::string JoinSide(const Side &side) {
  std::string out;
  for (const auto &t : side) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool SideMatches(const Side &side, std::span<const std::string> tokens, std::size_t i) {
  if (i + side.size() > tokens.size()) return false;
  return std::equal(side.begin(), side.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i));
}

}  // namespace

TransformRuleSet::TransformRuleSet(std::vector<TransformRule> rules) {
  std::set<std::pair<Side, Side>> seen;
  for (auto &rule : rules) {
    if (rule.lhs.empty() || rule.rhs.empty()) throw DataError("transform rule has an empty side");
    for (const auto *side : {&rule.lhs, &rule.rhs})
      for (const auto &token : *side)
        if (HasWhitespace(token)) throw DataError("transform token '" + token + "' is empty or contains whitespace");
    if (rule.lhs == rule.rhs) throw DataError("transform rule '" + JoinSide(rule.lhs) + "' maps onto itself");
    if (!seen.insert(CanonicalKey(rule)).second) continue;

    const std::size_t id = rules_.size();
    index_[rule.lhs.front()].push_back(id);
    if (rule.rhs.front() != rule.lhs.front()) index_[rule.rhs.front()].push_back(id);
    rules_.push_back(std::move(rule));
  }
}

std::span<const std::size_t> TransformRuleSet::RulesStartingWith(const std::string &token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return {};
  return it->second;
}

bool TransformRuleSet::Equivalent(const TransformRuleSet &other) const {
  std::set<std::pair<Side, Side>> mine, theirs;
  for (const auto &r : rules_) mine.insert(CanonicalKey(r));
  for (const auto &r : other.rules_) theirs.insert(CanonicalKey(r));
  return mine == theirs;
}

TransformRuleSet ParseSynonyms(std::string_view text, const std::string &source_name) {
  std::vector<TransformRule> rules;
  auto lines = SplitFields(text, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto pieces = SplitWhitespace(line);
    if (pieces.empty() || pieces.front().starts_with('#')) continue;
    if (!IsValidUtf8(line)) throw ParseError(source_name, line_no, "invalid UTF-8");

    auto sides = SplitFields(line, '|');
    if (sides.size() != 2) throw ParseError(source_name, line_no, "expected exactly one '|' separating lhs and rhs");

    TransformRule rule;
    for (auto [raw, out] : {std::pair{sides[0], &rule.lhs}, std::pair{sides[1], &rule.rhs}}) {
      for (auto piece : SplitWhitespace(raw)) {
        auto folded = ComparisonForm(piece);
        if (!folded.empty()) out->push_back(std::move(folded));
      }
    }
    if (rule.lhs.empty() || rule.rhs.empty()) throw ParseError(source_name, line_no, "empty side");
    if (rule.lhs == rule.rhs) throw ParseError(source_name, line_no, "lhs and rhs are identical");
    rules.push_back(std::move(rule));
  }
  return TransformRuleSet(std::move(rules));
}

std::string SerializeSynonyms(const TransformRuleSet &rules) {
  std::string out;
  for (const auto &rule : rules.rules()) out += JoinSide(rule.lhs) + "|" + JoinSide(rule.rhs) + "\n";
  return out;
}

std::vector<RuleMatch> MatchesAt(const TransformRuleSet &rules, std::span<const std::string> tokens, std::size_t i) {
  std::vector<RuleMatch> out;
  if (i >= tokens.size()) return out;
  for (std::size_t id : rules.RulesStartingWith(tokens[i])) {
    const auto &rule = rules.rules()[id];
    if (SideMatches(rule.lhs, tokens, i)) out.push_back({id, RuleSide::kLhs, rule.lhs.size()});
    if (SideMatches(rule.rhs, tokens, i)) out.push_back({id, RuleSide::kRhs, rule.rhs.size()});
  }
  return out;
}

CoverageStats TransformCoverageStats(std::span<const ReferenceDocument> docs, const TransformRuleSet &rules) {
  CoverageStats stats;
  for (const auto &doc : docs) {
    stats.tokens_total += doc.tokens.size();
    std::vector<std::string> folded;
    std::vector<std::size_t> original;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (doc.tokens[i].norm_id) ++stats.tokens_with_norm_candidates;
      auto form = ComparisonForm(doc.tokens[i].text);
      if (form.empty()) continue;
      folded.push_back(std::move(form));
      original.push_back(i);
    }

    std::vector<bool> covered(doc.tokens.size(), false);
    for (std::size_t p = 0; p < folded.size(); ++p) {
      for (const auto &m : MatchesAt(rules, folded, p)) {
        for (std::size_t t = original[p]; t <= original[p + m.length - 1]; ++t) covered[t] = true;
      }
    }
    stats.tokens_covered_by_synonym_match += static_cast<std::size_t>(std::count(covered.begin(), covered.end(), true));
  }
  if (stats.tokens_total > 0) {
    stats.fraction_norm = static_cast<double>(stats.tokens_with_norm_candidates) / static_cast<double>(stats.tokens_total);
    stats.fraction_syn =
        static_cast<double>(stats.tokens_covered_by_synonym_match) / static_cast<double>(stats.tokens_total);
  }
  return stats;
}

}  // namespace latalign
