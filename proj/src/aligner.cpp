#include "latalign/aligner.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "latalign/errors.h"

namespace latalign {
namespace {

// Backpointer move codes. Order doubles as the tie-break rank.
enum Move : std::uint8_t { kMoveCorrect = 0, kMoveSub = 1, kMoveDel = 2, kMoveEps = 3, kMoveIns = 4 };

constexpr Label kUnknownHyp = -2;

// Path score: edit cost in the high half, insertions plus deletions in the
// low half. Among equal-cost alignments the one with fewest indels wins, which
// keeps substitution counts independent of which side is the reference.
constexpr std::uint64_t kSubScore = std::uint64_t{1} << 32;
constexpr std::uint64_t kIndelScore = kSubScore + 1;
constexpr std::uint32_t ScoreCost(std::uint64_t score) { return static_cast<std::uint32_t>(score >> 32); }

__extension__ using Key = unsigned __int128;

// Candidate key: score | move | provenance kind | in-arc position. A smaller
// key wins; in-arc positions follow arc id order.
constexpr Key MakeKey(std::uint64_t score, std::uint64_t move, std::uint64_t kind, std::uint64_t k) {
  return (static_cast<Key>(score) << 64) | (move << 36) | (kind << 32) | k;
}
constexpr std::uint64_t KeyScore(Key key) { return static_cast<std::uint64_t>(key >> 64); }
constexpr std::uint8_t KeyMove(Key key) { return static_cast<std::uint8_t>((key >> 36) & 0xF); }
constexpr std::uint32_t KeyArc(Key key) { return static_cast<std::uint32_t>(key & 0xFFFFFFFFu); }

template <class Pointer>
Alignment AlignImpl(const Lattice &lattice, const TokenSequence &hyp) {
  const std::size_t cols = hyp.size() + 1;
  const std::size_t states = lattice.num_states();

  std::vector<Label> hyp_labels(hyp.size());
  for (std::size_t j = 0; j < hyp.size(); ++j) hyp_labels[j] = lattice.FindSymbol(hyp[j]).value_or(kUnknownHyp);

  std::vector<Pointer> back(states * cols);
  std::vector<std::vector<std::uint64_t>> rows(states);
  std::vector<std::size_t> consumers(states);
  for (StateId s = 0; s < states; ++s) consumers[s] = lattice.out_arcs(s).size();

  std::vector<Key> best(cols);
  for (StateId v : lattice.topo_order()) {
    auto ins = lattice.in_arcs(v);
    std::fill(best.begin(), best.end(), std::numeric_limits<Key>::max());
    if (v == lattice.start()) best[0] = MakeKey(0, kMoveIns, 0, 0);

    for (std::uint32_t k = 0; k < ins.size(); ++k) {
      const Arc &arc = lattice.arc(ins[k]);
      const auto &src = rows[arc.from];
      const auto kind = static_cast<std::uint64_t>(arc.provenance.kind);
      if (arc.label == kEpsilon) {
        for (std::size_t j = 0; j < cols; ++j) best[j] = std::min(best[j], MakeKey(src[j], kMoveEps, kind, k));
        continue;
      }
      best[0] = std::min(best[0], MakeKey(src[0] + kIndelScore, kMoveDel, kind, k));
      for (std::size_t j = 1; j < cols; ++j) {
        const bool match = hyp_labels[j - 1] == arc.label;
        best[j] = std::min(best[j],
                           MakeKey(src[j - 1] + (match ? 0 : kSubScore), match ? kMoveCorrect : kMoveSub, kind, k));
        best[j] = std::min(best[j], MakeKey(src[j] + kIndelScore, kMoveDel, kind, k));
      }
    }

    auto &row = rows[v];
    row.resize(cols);
    Pointer *cell = back.data() + static_cast<std::size_t>(v) * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      if (j > 0) best[j] = std::min(best[j], MakeKey(row[j - 1] + kIndelScore, kMoveIns, 0, 0));
      row[j] = KeyScore(best[j]);
      cell[j] = static_cast<Pointer>((KeyArc(best[j]) << 3) | KeyMove(best[j]));
    }

    for (ArcId id : ins) {
      StateId u = lattice.arc(id).from;
      if (--consumers[u] == 0) std::vector<std::uint64_t>().swap(rows[u]);
    }
  }

  Alignment alignment;
  alignment.cost = ScoreCost(rows[lattice.final_state()][hyp.size()]);

  StateId v = lattice.final_state();
  std::size_t j = hyp.size();
  while (v != lattice.start() || j > 0) {
    const Pointer p = back[static_cast<std::size_t>(v) * cols + j];
    const auto move = static_cast<Move>(p & 0x7);
    if (move == kMoveIns) {
      --j;
      alignment.ops.push_back({EditKind::kInsertion, j, std::nullopt, std::nullopt, hyp[j]});
      continue;
    }
    const Arc &arc = lattice.arc(lattice.in_arcs(v)[p >> 3]);
    switch (move) {
      case kMoveCorrect:
      case kMoveSub:
        --j;
        alignment.ops.push_back({move == kMoveCorrect ? EditKind::kCorrect : EditKind::kSubstitution, j,
                                 arc.provenance, lattice.symbol(arc.label), hyp[j]});
        break;
      case kMoveDel:
        alignment.ops.push_back(
            {EditKind::kDeletion, std::nullopt, arc.provenance, lattice.symbol(arc.label), std::nullopt});
        break;
      default:
        break;
    }
    v = arc.from;
  }
  std::reverse(alignment.ops.begin(), alignment.ops.end());
  alignment.best_path_ref_len = static_cast<std::size_t>(std::count_if(
      alignment.ops.begin(), alignment.ops.end(), [](const EditOp &op) { return op.kind != EditKind::kInsertion; }));
  return alignment;
}

}  // namespace

std::string_view EditKindCode(EditKind kind) {
  switch (kind) {
    case EditKind::kCorrect:
      return "C";
    case EditKind::kSubstitution:
      return "S";
    case EditKind::kDeletion:
      return "D";
    case EditKind::kInsertion:
      return "I";
  }
  return "?";
}

Alignment Align(const Lattice &lattice, const TokenSequence &hyp) {
  if (hyp.size() >= (std::size_t{1} << 31)) throw DataError("hypothesis too long to align");
  if (lattice.max_in_degree() < (std::size_t{1} << 13)) return AlignImpl<std::uint16_t>(lattice, hyp);
  if (lattice.max_in_degree() < (std::size_t{1} << 29)) return AlignImpl<std::uint32_t>(lattice, hyp);
  throw DataError("lattice in-degree too large to align");
}

Alignment LevenshteinAlign(const TokenSequence &ref, const TokenSequence &hyp) {
  std::unordered_map<std::string, std::int32_t> ids;
  auto intern = [&ids](const std::string &t) { return ids.try_emplace(t, static_cast<std::int32_t>(ids.size())).first->second; };
  std::vector<std::int32_t> r(ref.size()), h(hyp.size());
  for (std::size_t i = 0; i < ref.size(); ++i) r[i] = intern(ref[i]);
  for (std::size_t j = 0; j < hyp.size(); ++j) h[j] = intern(hyp[j]);

  const std::size_t n = ref.size(), m = hyp.size(), cols = m + 1;
  std::vector<std::uint8_t> back((n + 1) * cols, kMoveIns);
  std::vector<std::uint64_t> prev(cols), cur(cols);
  for (std::size_t j = 0; j < cols; ++j) prev[j] = j * kIndelScore;

  for (std::size_t i = 1; i <= n; ++i) {
    std::uint8_t *cell = back.data() + i * cols;
    cur[0] = prev[0] + kIndelScore;
    cell[0] = kMoveDel;
    for (std::size_t j = 1; j < cols; ++j) {
      const bool match = r[i - 1] == h[j - 1];
      std::uint64_t score = prev[j - 1] + (match ? 0 : kSubScore);
      std::uint8_t move = match ? kMoveCorrect : kMoveSub;
      if (prev[j] + kIndelScore < score) {
        score = prev[j] + kIndelScore;
        move = kMoveDel;
      }
      if (cur[j - 1] + kIndelScore < score) {
        score = cur[j - 1] + kIndelScore;
        move = kMoveIns;
      }
      cur[j] = score;
      cell[j] = move;
    }
    std::swap(prev, cur);
  }

  Alignment alignment;
  alignment.cost = ScoreCost(prev[m]);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    switch (back[i * cols + j]) {
      case kMoveCorrect:
      case kMoveSub:
        --i;
        --j;
        alignment.ops.push_back({back[(i + 1) * cols + j + 1] == kMoveCorrect ? EditKind::kCorrect
                                                                            : EditKind::kSubstitution,
                                 j, Provenance{i, 1, AltKind::kVerbatim}, ref[i], hyp[j]});
        break;
      case kMoveDel:
        --i;
        alignment.ops.push_back(
            {EditKind::kDeletion, std::nullopt, Provenance{i, 1, AltKind::kVerbatim}, ref[i], std::nullopt});
        break;
      default:
        --j;
        alignment.ops.push_back({EditKind::kInsertion, j, std::nullopt, std::nullopt, hyp[j]});
        break;
    }
  }
  std::reverse(alignment.ops.begin(), alignment.ops.end());
  alignment.best_path_ref_len = n;
  return alignment;
}

}  // namespace latalign
