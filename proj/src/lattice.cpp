#include "latalign/lattice.h"

#include <algorithm>
#include <deque>
#include <set>

#include "latalign/errors.h"
#include "latalign/text.h"

namespace latalign {
namespace {

void BuildCsr(std::size_t num_states, const std::vector<Arc> &arcs, bool incoming, std::vector<std::size_t> &offsets,
              std::vector<ArcId> &list) {
  offsets.assign(num_states + 1, 0);
  for (const auto &a : arcs) ++offsets[(incoming ? a.to : a.from) + 1];
  for (std::size_t s = 0; s < num_states; ++s) offsets[s + 1] += offsets[s];
  list.assign(arcs.size(), 0);
  auto cursor = offsets;
  for (ArcId id = 0; id < arcs.size(); ++id) list[cursor[incoming ? arcs[id].to : arcs[id].from]++] = id;
}

class LatticeBuilder {
 public:
  explicit LatticeBuilder(std::size_t num_ref_tokens) : num_ref_tokens_(num_ref_tokens) {}

  StateId AddState() { return static_cast<StateId>(num_states_++); }

  Label Intern(const std::string &token) {
    auto [it, inserted] = ids_.try_emplace(token, static_cast<Label>(symbols_.size()));
    if (inserted) symbols_.push_back(token);
    return it->second;
  }

  void AddArc(StateId from, StateId to, Label label, Provenance provenance) {
    arcs_.push_back({from, to, label, provenance});
  }

  /// Chain of arcs from `from` to `to` spelling `tokens` (non-empty).
  void AddBranch(StateId from, StateId to, const std::vector<std::string> &tokens, Provenance provenance) {
    StateId current = from;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      StateId next = (k + 1 == tokens.size()) ? to : AddState();
      AddArc(current, next, Intern(tokens[k]), provenance);
      current = next;
    }
  }

  Lattice Finish(StateId start, StateId final_state) && {
    return Lattice(num_states_, start, final_state, std::move(arcs_), std::move(symbols_), num_ref_tokens_);
  }

 private:
  std::size_t num_ref_tokens_;
  std::size_t num_states_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Label> ids_;
};

}  // namespace

std::string_view AltKindName(AltKind kind) {
  switch (kind) {
    case AltKind::kVerbatim:
      return "verbatim";
    case AltKind::kSynonym:
      return "synonym";
    case AltKind::kNormalization:
      return "normalization";
  }
  return "verbatim";
}

Lattice::Lattice(std::size_t num_states, StateId start, StateId final_state, std::vector<Arc> arcs,
                 std::vector<std::string> symbols, std::size_t num_ref_tokens)
    : num_states_(num_states),
      start_(start),
      final_(final_state),
      arcs_(std::move(arcs)),
      symbols_(std::move(symbols)),
      num_ref_tokens_(num_ref_tokens) {
  if (num_states_ == 0) throw DataError("lattice has no states");
  if (start_ >= num_states_ || final_ >= num_states_) throw DataError("lattice start/final out of range");
  for (std::size_t i = 0; i < symbols_.size(); ++i) symbol_ids_.emplace(symbols_[i], static_cast<Label>(i));

  for (const auto &a : arcs_) {
    if (a.from >= num_states_ || a.to >= num_states_) throw DataError("lattice arc references a missing state");
    if (a.label != kEpsilon && (a.label < 0 || static_cast<std::size_t>(a.label) >= symbols_.size()))
      throw DataError("lattice arc has an unknown label");
    const auto &p = a.provenance;
    if (p.ref_token_len == 0 || p.ref_token_start + p.ref_token_len > num_ref_tokens_)
      throw DataError("lattice arc provenance out of range");
  }

  BuildCsr(num_states_, arcs_, true, in_offsets_, in_list_);
  BuildCsr(num_states_, arcs_, false, out_offsets_, out_list_);

  if (!in_arcs(start_).empty()) throw DataError("lattice start state has incoming arcs");
  if (!out_arcs(final_).empty()) throw DataError("lattice final state has outgoing arcs");

  // Kahn's algorithm; FIFO keeps the order deterministic.
  std::vector<std::size_t> pending(num_states_);
  std::deque<StateId> ready;
  for (StateId s = 0; s < num_states_; ++s) {
    pending[s] = in_arcs(s).size();
    max_in_degree_ = std::max(max_in_degree_, pending[s]);
    if (pending[s] == 0) ready.push_back(s);
  }
  topo_order_.reserve(num_states_);
  while (!ready.empty()) {
    StateId s = ready.front();
    ready.pop_front();
    topo_order_.push_back(s);
    for (ArcId id : out_arcs(s))
      if (--pending[arcs_[id].to] == 0) ready.push_back(arcs_[id].to);
  }
  if (topo_order_.size() != num_states_) throw DataError("lattice has a cycle");

  std::vector<bool> reachable(num_states_, false), coreachable(num_states_, false);
  reachable[start_] = true;
  for (StateId s : topo_order_)
    if (reachable[s])
      for (ArcId id : out_arcs(s)) reachable[arcs_[id].to] = true;
  coreachable[final_] = true;
  for (auto it = topo_order_.rbegin(); it != topo_order_.rend(); ++it)
    for (ArcId id : out_arcs(*it))
      if (coreachable[arcs_[id].to]) coreachable[*it] = true;
  for (StateId s = 0; s < num_states_; ++s)
    if (!reachable[s] || !coreachable[s])
      throw DataError("lattice state " + std::to_string(s) + " is not on a start-to-final path");
}

std::span<const ArcId> Lattice::in_arcs(StateId s) const {
  return std::span<const ArcId>(in_list_).subspan(in_offsets_[s], in_offsets_[s + 1] - in_offsets_[s]);
}

std::span<const ArcId> Lattice::out_arcs(StateId s) const {
  return std::span<const ArcId>(out_list_).subspan(out_offsets_[s], out_offsets_[s + 1] - out_offsets_[s]);
}

std::optional<Label> Lattice::FindSymbol(const std::string &token) const {
  auto it = symbol_ids_.find(token);
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

Lattice BuildLattice(const ReferenceDocument &doc, const TransformRuleSet &rules) {
  const std::size_t n = doc.tokens.size();
  LatticeBuilder builder(n);
  for (std::size_t i = 0; i <= n; ++i) builder.AddState();

  std::vector<std::string> folded;
  std::vector<std::size_t> original;
  for (std::size_t i = 0; i < n; ++i) {
    auto form = ComparisonForm(doc.tokens[i].text);
    const Provenance verbatim{i, 1, AltKind::kVerbatim};
    const auto from = static_cast<StateId>(i);
    const auto to = static_cast<StateId>(i + 1);
    if (form.empty()) {
      builder.AddArc(from, to, kEpsilon, verbatim);
      continue;
    }
    builder.AddArc(from, to, builder.Intern(form), verbatim);
    folded.push_back(std::move(form));
    original.push_back(i);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto &norm_id = doc.tokens[i].norm_id;
    if (!norm_id) continue;
    auto it = doc.norms.find(*norm_id);
    if (it == doc.norms.end())
      throw DataError("token " + std::to_string(i) + " references unresolved norm_id '" + *norm_id + "'");
    for (const auto &candidate : it->second) {
      if (candidate.empty()) throw DataError("norm '" + *norm_id + "' has an empty candidate");
      builder.AddBranch(static_cast<StateId>(i), static_cast<StateId>(i + 1), candidate,
                        Provenance{i, 1, AltKind::kNormalization});
    }
  }

  for (std::size_t p = 0; p < folded.size(); ++p) {
    for (const auto &match : MatchesAt(rules, folded, p)) {
      const auto &rule = rules.rules()[match.rule];
      const auto &replacement = match.side == RuleSide::kLhs ? rule.rhs : rule.lhs;
      const std::size_t first = original[p];
      const std::size_t last = original[p + match.length - 1];
      builder.AddBranch(static_cast<StateId>(first), static_cast<StateId>(last + 1), replacement,
                        Provenance{first, last - first + 1, AltKind::kSynonym});
    }
  }

  return std::move(builder).Finish(0, static_cast<StateId>(n));
}

Lattice LinearLattice(const TokenSequence &tokens) {
  LatticeBuilder builder(tokens.size());
  for (std::size_t i = 0; i <= tokens.size(); ++i) builder.AddState();
  for (std::size_t i = 0; i < tokens.size(); ++i)
    builder.AddArc(static_cast<StateId>(i), static_cast<StateId>(i + 1), builder.Intern(tokens[i]),
                   Provenance{i, 1, AltKind::kVerbatim});
  return std::move(builder).Finish(0, static_cast<StateId>(tokens.size()));
}

std::vector<TokenSequence> EnumeratePaths(const Lattice &lattice, std::size_t limit) {
  std::set<std::vector<std::string>> found;
  std::vector<std::string> prefix;

  // explicit stack of (state, next out-arc position, pushed a label)
  struct Frame {
    StateId state;
    std::size_t next;
    bool pushed;
  };
  std::vector<Frame> stack{{lattice.start(), 0, false}};
  while (!stack.empty()) {
    auto &frame = stack.back();
    if (frame.state == lattice.final_state() && frame.next == 0) {
      found.insert(prefix);
      if (found.size() > limit)
        throw PathLimitExceeded("lattice has more than " + std::to_string(limit) + " distinct paths");
    }
    auto outs = lattice.out_arcs(frame.state);
    if (frame.next >= outs.size()) {
      if (frame.pushed) prefix.pop_back();
      stack.pop_back();
      continue;
    }
    const Arc &arc = lattice.arc(outs[frame.next++]);
    const bool push = arc.label != kEpsilon;
    if (push) prefix.push_back(lattice.symbol(arc.label));
    stack.push_back({arc.to, 0, push});
  }

  std::vector<TokenSequence> out;
  out.reserve(found.size());
  for (const auto &path : found) out.push_back(TokenSequence{path, TokenSource::kNlpDerived});
  return out;
}

LatticeStats ComputeLatticeStats(const Lattice &lattice) {
  LatticeStats stats;
  stats.states = lattice.num_states();
  stats.arcs = lattice.arcs().size();

  std::vector<std::int64_t> count(lattice.num_states(), 0);
  std::vector<bool> overflow(lattice.num_states(), false);
  count[lattice.start()] = 1;
  for (StateId s : lattice.topo_order()) {
    for (ArcId id : lattice.out_arcs(s)) {
      StateId to = lattice.arc(id).to;
      if (overflow[s] || __builtin_add_overflow(count[to], count[s], &count[to])) overflow[to] = true;
    }
  }
  stats.path_count_overflow = overflow[lattice.final_state()];
  stats.path_count = stats.path_count_overflow ? 0 : count[lattice.final_state()];
  return stats;
}

std::string DumpLattice(const Lattice &lattice) {
  std::string out;
  for (const auto &a : lattice.arcs()) {
    out += std::to_string(a.from) + '\t' + std::to_string(a.to) + '\t' +
           (a.label == kEpsilon ? std::string("<eps>") : lattice.symbol(a.label)) + '\t' +
           std::to_string(a.provenance.ref_token_start) + '\t' + std::to_string(a.provenance.ref_token_len) + '\t' +
           std::string(AltKindName(a.provenance.kind)) + '\n';
  }
  out += std::to_string(lattice.final_state()) + '\n';
  return out;
}

}  // namespace latalign
