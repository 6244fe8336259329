#include "bnsl/neighbourhood.hpp"

#include "bnsl/errors.hpp"

namespace bnsl {

std::string to_string(const Move& m) {
  switch (m.kind) {
    case MoveKind::add: return "add " + to_string(m.arc);
    case MoveKind::remove: return "remove " + to_string(m.arc);
    case MoveKind::reverse: return "reverse " + to_string(m.arc);
  }
  return "?";
}

NeighbourhoodTag NeighbourhoodKind::local_tag() const {
  switch (tag) {
    case NeighbourhoodTag::rcarr: return NeighbourhoodTag::ncr;
    case NeighbourhoodTag::rcarnr: return NeighbourhoodTag::nr;
    default: return tag;
  }
}

std::string NeighbourhoodKind::name() const {
  switch (tag) {
    case NeighbourhoodTag::nr: return "nr";
    case NeighbourhoodTag::ar: return "ar";
    case NeighbourhoodTag::cr: return "cr";
    case NeighbourhoodTag::ncr: return "ncr";
    case NeighbourhoodTag::rcarr: return "rcarr";
    case NeighbourhoodTag::rcarnr: return "rcarnr";
  }
  return "?";
}

NeighbourhoodKind NeighbourhoodKind::parse(std::string_view name, int tau) {
  if (tau < 0) throw ConfigError("tau must be non-negative");
  static constexpr std::pair<std::string_view, NeighbourhoodTag> kNames[] = {
      {"nr", NeighbourhoodTag::nr},   {"ar", NeighbourhoodTag::ar},       {"cr", NeighbourhoodTag::cr},
      {"ncr", NeighbourhoodTag::ncr}, {"rcarr", NeighbourhoodTag::rcarr}, {"rcarnr", NeighbourhoodTag::rcarnr},
  };
  for (const auto& [spelling, tag] : kNames) {
    if (spelling == name) return NeighbourhoodKind{tag, RcarConfig{tau, 0}};
  }
  throw ConfigError("unknown neighbourhood '" + std::string(name) + "' (expected nr|ar|cr|ncr|rcarr|rcarnr)");
}

namespace {

enum class Reversals { none, all, covered, non_covered };

Reversals reversals_of(NeighbourhoodTag tag) {
  switch (tag) {
    case NeighbourhoodTag::nr:
    case NeighbourhoodTag::rcarnr: return Reversals::none;
    case NeighbourhoodTag::ar: return Reversals::all;
    case NeighbourhoodTag::cr: return Reversals::covered;
    case NeighbourhoodTag::ncr:
    case NeighbourhoodTag::rcarr: return Reversals::non_covered;
  }
  return Reversals::none;
}

// Calls emit(move) for every move of the operator, in (kind, arc) order.
template <typename Emit>
void for_each_move(const Dag& g, Reversals policy, Emit&& emit) {
  const int n = g.size();
  std::vector<NodeSet> desc(n);
  for (int v = 0; v < n; ++v) desc[v] = g.descendants(v);

  for (int t = 0; t < n; ++t) {
    for (int h = 0; h < n; ++h) {
      if (t != h && !g.neighbours(t).contains(h) && !desc[h].contains(t)) emit(Move{MoveKind::add, {t, h}});
    }
  }
  for (int t = 0; t < n; ++t) {
    for (int h : g.children(t)) emit(Move{MoveKind::remove, {t, h}});
  }
  if (policy == Reversals::none) return;
  for (int t = 0; t < n; ++t) {
    for (int h : g.children(t)) {
      const bool covered = g.parents(h) == (g.parents(t) | NodeSet::single(t));
      if (policy == Reversals::covered && !covered) continue;
      if (policy == Reversals::non_covered && covered) continue;
      if (!covered) {
        bool blocked = false;
        for (int c : g.children(t) - NodeSet::single(h)) {
          if (desc[c].contains(h)) {
            blocked = true;
            break;
          }
        }
        if (blocked) continue;
      }
      emit(Move{MoveKind::reverse, {t, h}});
    }
  }
}

}  // namespace

std::vector<Move> local_moves(const Dag& g, NeighbourhoodTag tag) {
  std::vector<Move> moves;
  for_each_move(g, reversals_of(tag), [&](const Move& m) { moves.push_back(m); });
  return moves;
}

Neighbourhood neighbourhood(const Dag& g, const NeighbourhoodKind& kind, Rng& rng) {
  Neighbourhood out{kind.uses_rcar() ? rcar(g, kind.rcar, rng) : g, {}};
  out.moves = local_moves(out.base, kind.local_tag());
  return out;
}

std::size_t neighbourhood_size(const Dag& g, NeighbourhoodTag tag) {
  if (tag == NeighbourhoodTag::rcarr || tag == NeighbourhoodTag::rcarnr) {
    throw ConfigError("neighbourhood size is random for RCAR kinds");
  }
  std::size_t count = 0;
  for_each_move(g, reversals_of(tag), [&](const Move&) { ++count; });
  return count;
}

void apply_move_in_place(Dag& g, const Move& m) {
  switch (m.kind) {
    case MoveKind::add: g.add_arc(m.arc); break;
    case MoveKind::remove: g.remove_arc(m.arc); break;
    case MoveKind::reverse: g.reverse_arc(m.arc); break;
  }
}

Dag apply_move(const Dag& g, const Move& m) {
  Dag out = g;
  apply_move_in_place(out, m);
  return out;
}

ProposedMove random_move(const Dag& g, const NeighbourhoodKind& kind, Rng& rng) {
  Neighbourhood nh = neighbourhood(g, kind, rng);
  if (nh.moves.empty()) throw EmptyNeighbourhoodError("no local move is available");
  const Move m = nh.moves[uniform_index(rng, nh.moves.size())];
  return {std::move(nh.base), m};
}

}  // namespace bnsl
