#include <gtest/gtest.h>

#include <random>

#include "generators.h"
#include "latalign/aligner.h"
#include "oracles.h"

using namespace latalign;

namespace {

TokenSequence Seq(std::vector<std::string> tokens) { return TokenSequence{std::move(tokens), TokenSource::kPlainText}; }

ReferenceDocument Doc(std::vector<std::string> words) {
  ReferenceDocument doc;
  for (auto &w : words) doc.tokens.push_back(NlpToken{.text = w});
  return doc;
}

struct Counts {
  std::size_t c = 0, s = 0, d = 0, i = 0;
};

Counts Tally(const Alignment &a) {
  Counts n;
  for (const auto &op : a.ops) {
    switch (op.kind) {
      case EditKind::kCorrect: ++n.c; break;
      case EditKind::kSubstitution: ++n.s; break;
      case EditKind::kDeletion: ++n.d; break;
      case EditKind::kInsertion: ++n.i; break;
    }
  }
  return n;
}

/// Replays an alignment against the lattice: ops must walk one
/// start-to-final path (epsilons implicit) and consume the hypothesis in order.
void ExpectValidReplay(const Lattice &lat, const TokenSequence &hyp, const Alignment &a) {
  auto n = Tally(a);
  EXPECT_EQ(a.cost, n.s + n.d + n.i);
  EXPECT_EQ(a.best_path_ref_len, n.c + n.s + n.d);

  std::size_t next_hyp = 0;
  std::vector<std::string> path_labels;
  for (const auto &op : a.ops) {
    const bool has_hyp = op.kind != EditKind::kDeletion;
    const bool has_ref = op.kind != EditKind::kInsertion;
    EXPECT_EQ(op.hyp_index.has_value(), has_hyp);
    EXPECT_EQ(op.hyp_label.has_value(), has_hyp);
    EXPECT_EQ(op.ref_label.has_value(), has_ref);
    EXPECT_EQ(op.arc_provenance.has_value(), has_ref);
    if (has_hyp) {
      EXPECT_EQ(*op.hyp_index, next_hyp++);
      EXPECT_EQ(*op.hyp_label, hyp[*op.hyp_index]);
    }
    if (op.kind == EditKind::kCorrect) EXPECT_EQ(op.ref_label, op.hyp_label);
    if (op.kind == EditKind::kSubstitution) EXPECT_NE(op.ref_label, op.hyp_label);
    if (has_ref) path_labels.push_back(*op.ref_label);
  }
  EXPECT_EQ(next_hyp, hyp.size());

  bool on_lattice = false;
  for (const auto &p : EnumeratePaths(lat, 1000000))
    if (p.tokens == path_labels) on_lattice = true;
  EXPECT_TRUE(on_lattice);
}

}  // namespace

TEST(Align, PenaltyFreeSynonym) {
  auto lat = BuildLattice(Doc({"I'm", "going", "to", "win."}), ParseSynonyms("going to|gonna\n"));
  auto hyp = Seq({"i'm", "gonna", "win"});
  auto a = Align(lat, hyp);
  EXPECT_EQ(a.cost, 0u);
  EXPECT_EQ(a.best_path_ref_len, 3u);
  ASSERT_EQ(a.ops.size(), 3u);
  EXPECT_EQ(a.ops[1].ref_label, "gonna");
  EXPECT_EQ(a.ops[1].arc_provenance, (Provenance{1, 2, AltKind::kSynonym}));
  ExpectValidReplay(lat, hyp, a);
}

TEST(Align, LinearSubstitution) {
  auto hyp = Seq({"a", "x", "c"});
  auto lat = LinearLattice(Seq({"a", "b", "c"}));
  auto a = Align(lat, hyp);
  EXPECT_EQ(a.cost, oracle::Levenshtein({"a", "b", "c"}, hyp.tokens));
  EXPECT_EQ(a.cost, 1u);
  EXPECT_EQ(Tally(a).s, 1u);
}

TEST(Align, EmptyHypothesisDeletesAll) {
  auto a = Align(LinearLattice(Seq({"a", "b"})), Seq({}));
  EXPECT_EQ(a.cost, 2u);
  EXPECT_EQ(Tally(a).d, 2u);
  EXPECT_EQ(a.best_path_ref_len, 2u);
}

TEST(Align, EmptyLattice) {
  auto lat = BuildLattice(ReferenceDocument{}, {});
  auto a = Align(lat, Seq({"x", "y"}));
  EXPECT_EQ(a.cost, 2u);
  EXPECT_EQ(Tally(a).i, 2u);
  EXPECT_EQ(a.best_path_ref_len, 0u);
  EXPECT_EQ(Align(lat, Seq({})).ops.size(), 0u);
}

TEST(Align, EpsilonArcsAreFree) {
  auto lat = BuildLattice(Doc({"a", "...", "b"}), {});
  auto a = Align(lat, Seq({"a", "b"}));
  EXPECT_EQ(a.cost, 0u);
  EXPECT_EQ(a.best_path_ref_len, 2u);
}

TEST(Align, PrefersVerbatimOnTies) {
  // "x" vs candidates {"x"}: both paths are cost 0; verbatim wins
  auto doc = Doc({"x"});
  doc.tokens[0].norm_id = "n";
  doc.norms["n"] = {{"x"}};
  auto a = Align(BuildLattice(doc, {}), Seq({"x"}));
  ASSERT_EQ(a.ops.size(), 1u);
  EXPECT_EQ(a.ops[0].arc_provenance->kind, AltKind::kVerbatim);
}

TEST(LevenshteinAlign, Examples) {
  auto same = Seq({"p", "q", "r"});
  auto a = LevenshteinAlign(same, same);
  EXPECT_EQ(a.cost, 0u);
  EXPECT_EQ(Tally(a).c, 3u);

  auto ins = LevenshteinAlign(Seq({"a"}), Seq({"a", "b"}));
  EXPECT_EQ(ins.cost, 1u);
  EXPECT_EQ(Tally(ins).i, 1u);
}

TEST(LevenshteinAlign, NoTransformGonna) {
  std::vector<std::string> ref{"i'm", "going", "to", "win"}, hyp{"i'm", "gonna", "win"};
  auto brute = oracle::MinimalEditCounts(ref, hyp);
  ASSERT_EQ(brute, (std::set<std::tuple<int, int, int>>{{1, 1, 0}}));
  auto a = LevenshteinAlign(Seq(ref), Seq(hyp));
  EXPECT_EQ(a.cost, 2u);
  EXPECT_EQ(Tally(a).s, 1u);
  EXPECT_EQ(Tally(a).d, 1u);
}

TEST(AlignProperties, MatchesMinimumOverEnumeratedPaths) {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 1200; ++trial) {
    auto c = gen::RandomCase(rng, 10, 2, 2);
    auto hyp = Seq(gen::Tokens(rng, 0, 12));
    auto lat = BuildLattice(c.doc, c.rules);
    std::set<std::vector<std::string>> paths;
    for (const auto &p : EnumeratePaths(lat, 1000000)) paths.insert(p.tokens);

    auto a = Align(lat, hyp);
    ASSERT_EQ(a.cost, oracle::MinCostOverPaths(paths, hyp.tokens)) << "trial " << trial;
    if (trial % 10 == 0) ExpectValidReplay(lat, hyp, a);
  }
}

TEST(AlignProperties, LevenshteinAgreesWithLinearLattice) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    auto ref = Seq(gen::Tokens(rng, 0, 15));
    auto hyp = Seq(gen::Tokens(rng, 0, 15));
    auto fast = LevenshteinAlign(ref, hyp);
    EXPECT_EQ(fast, Align(LinearLattice(ref), hyp));
    EXPECT_EQ(fast.cost, oracle::Levenshtein(ref.tokens, hyp.tokens));
  }
}

TEST(AlignProperties, SwapSymmetry) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = Seq(gen::Tokens(rng, 0, 10));
    auto b = Seq(gen::Tokens(rng, 0, 10));
    auto ab = Tally(LevenshteinAlign(a, b));
    auto ba = Tally(LevenshteinAlign(b, a));
    EXPECT_EQ(ab.s, ba.s);
    EXPECT_EQ(ab.i, ba.d);
    EXPECT_EQ(ab.d, ba.i);
  }
}

TEST(AlignProperties, DeterministicOps) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = gen::RandomCase(rng);
    auto hyp = Seq(gen::Tokens(rng, 0, 12));
    auto lat = BuildLattice(c.doc, c.rules);
    EXPECT_EQ(Align(lat, hyp), Align(BuildLattice(c.doc, c.rules), hyp));
  }
}

TEST(AlignProperties, CostBounds) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    auto c = gen::RandomCase(rng);
    auto hyp = Seq(gen::Tokens(rng, 0, 12));
    auto a = Align(BuildLattice(c.doc, c.rules), hyp);
    const auto path_len = a.best_path_ref_len;
    EXPECT_LE(a.cost, std::max(path_len, hyp.size()));
    EXPECT_GE(a.cost, path_len > hyp.size() ? path_len - hyp.size() : hyp.size() - path_len);
  }
}

TEST(AlignProperties, MoreRulesNeverCostMore) {
  std::mt19937 rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    auto c = gen::RandomCase(rng);
    auto hyp = Seq(gen::Tokens(rng, 0, 12));
    auto rules = c.raw_rules;
    rules.push_back({gen::Tokens(rng, 1, 2), gen::Tokens(rng, 1, 2)});
    if (rules.back().lhs == rules.back().rhs) continue;
    EXPECT_LE(Align(BuildLattice(c.doc, TransformRuleSet(rules)), hyp).cost,
              Align(BuildLattice(c.doc, c.rules), hyp).cost);
  }
}
