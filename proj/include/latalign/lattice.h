#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "latalign/nlp_format.h"
#include "latalign/transforms.h"

namespace latalign {

using StateId = std::uint32_t;
using ArcId = std::uint32_t;
/// Index into Lattice::symbols(), or kEpsilon.
using Label = std::int32_t;
inline constexpr Label kEpsilon = -1;

enum class AltKind : std::uint8_t { kVerbatim = 0, kSynonym = 1, kNormalization = 2 };

std::string_view AltKindName(AltKind kind);

/// Which original reference tokens an arc stands for.
struct Provenance {
  std::size_t ref_token_start = 0;
  std::size_t ref_token_len = 1;
  AltKind kind = AltKind::kVerbatim;

  friend bool operator==(const Provenance &, const Provenance &) = default;
};

struct Arc {
  StateId from = 0;
  StateId to = 0;
  Label label = kEpsilon;
  Provenance provenance;
};

/// Acyclic acceptor whose start-to-final paths are the acceptable realizations
/// of one reference. Immutable once constructed.
class Lattice {
 public:
  /// Validates the structure: ids in range, acyclic, start has no incoming
  /// arcs, final has no outgoing arcs, every state on a start-to-final path,
  /// provenance inside [0, num_ref_tokens). Throws DataError otherwise.
  Lattice(std::size_t num_states, StateId start, StateId final_state, std::vector<Arc> arcs,
          std::vector<std::string> symbols, std::size_t num_ref_tokens);

  StateId start() const { return start_; }
  StateId final_state() const { return final_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_ref_tokens() const { return num_ref_tokens_; }

  const std::vector<Arc> &arcs() const { return arcs_; }
  const Arc &arc(ArcId id) const { return arcs_[id]; }
  std::span<const ArcId> in_arcs(StateId s) const;
  std::span<const ArcId> out_arcs(StateId s) const;
  const std::vector<StateId> &topo_order() const { return topo_order_; }
  std::size_t max_in_degree() const { return max_in_degree_; }

  const std::vector<std::string> &symbols() const { return symbols_; }
  const std::string &symbol(Label label) const { return symbols_[static_cast<std::size_t>(label)]; }
  std::optional<Label> FindSymbol(const std::string &token) const;

 private:
  std::size_t num_states_;
  StateId start_;
  StateId final_;
  std::vector<Arc> arcs_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Label> symbol_ids_;
  std::size_t num_ref_tokens_;

  // CSR adjacency
  std::vector<std::size_t> in_offsets_, out_offsets_;
  std::vector<ArcId> in_list_, out_list_;
  std::vector<StateId> topo_order_;
  std::size_t max_in_degree_ = 0;
};

/// Backbone of verbatim comparison forms plus, in parallel, one branch per
/// normalization candidate and one per synonym match (emitting the opposite
/// side). Branches hang off the verbatim backbone only; they never nest.
Lattice BuildLattice(const ReferenceDocument &doc, const TransformRuleSet &rules);

/// The linear lattice accepting exactly `tokens`.
Lattice LinearLattice(const TokenSequence &tokens);

/// Distinct label sequences, sorted. Throws PathLimitExceeded past `limit`.
std::vector<TokenSequence> EnumeratePaths(const Lattice &lattice, std::size_t limit);

struct LatticeStats {
  std::size_t states = 0;
  std::size_t arcs = 0;
  /// Number of start-to-final paths (not distinct label sequences).
  std::int64_t path_count = 0;
  bool path_count_overflow = false;
};

LatticeStats ComputeLatticeStats(const Lattice &lattice);

/// `from<TAB>to<TAB>label<TAB>ref_start<TAB>ref_len<TAB>kind` per arc, then
/// the final state id alone on the last line.
std::string DumpLattice(const Lattice &lattice);

}  // namespace latalign
