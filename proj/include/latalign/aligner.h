#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latalign/lattice.h"
#include "latalign/nlp_format.h"

namespace latalign {

enum class EditKind : std::uint8_t { kCorrect, kSubstitution, kDeletion, kInsertion };

/// Single-letter code used in side-by-side output: C, S, D, I.
std::string_view EditKindCode(EditKind kind);

struct EditOp {
  EditKind kind = EditKind::kCorrect;
  std::optional<std::size_t> hyp_index;
  std::optional<Provenance> arc_provenance;
  std::optional<std::string> ref_label;
  std::optional<std::string> hyp_label;

  friend bool operator==(const EditOp &, const EditOp &) = default;
};

struct Alignment {
  std::vector<EditOp> ops;
  std::size_t cost = 0;
  /// Non-epsilon reference arcs on the chosen path.
  std::size_t best_path_ref_len = 0;

  friend bool operator==(const Alignment &, const Alignment &) = default;
};

/// Minimum unit-cost edit alignment of `hyp` against any start-to-final path
/// of `lattice`. Epsilon arcs are free. Ties resolve by cost, then
/// Correct < Substitution < Deletion < Insertion, then verbatim < synonym <
/// normalization provenance, then lower arc id, so the result is a pure
/// function of the inputs.
///
/// Time O(arcs * |hyp|); memory is dominated by one 2- or 4-byte backpointer
/// per (state, hyp prefix) cell.
Alignment Align(const Lattice &lattice, const TokenSequence &hyp);

/// Classic Levenshtein alignment. Produces exactly what Align would on
/// LinearLattice(ref).
Alignment LevenshteinAlign(const TokenSequence &ref, const TokenSequence &hyp);

}  // namespace latalign
