#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/dag.hpp"
#include "bnsl/equivalence.hpp"
#include "bnsl/random.hpp"

namespace bnsl {

enum class MoveKind { add, remove, reverse };

struct Move {
  MoveKind kind = MoveKind::add;
  Arc arc;

  constexpr auto operator<=>(const Move&) const = default;
};

std::string to_string(const Move& m);

// The six traversal operators. nr: add/remove only; ar: plus every valid
// reversal; cr: plus covered reversals; ncr: plus non-covered valid
// reversals; rcarr / rcarnr: an RCAR walk, then ncr / nr on the result.
enum class NeighbourhoodTag { nr, ar, cr, ncr, rcarr, rcarnr };

struct NeighbourhoodKind {
  NeighbourhoodTag tag = NeighbourhoodTag::ar;
  // Only read for rcarr / rcarnr.
  RcarConfig rcar;

  bool uses_rcar() const { return tag == NeighbourhoodTag::rcarr || tag == NeighbourhoodTag::rcarnr; }
  // The deterministic operator applied after the optional RCAR walk.
  NeighbourhoodTag local_tag() const;
  std::string name() const;

  // Canonical spellings: nr|ar|cr|ncr|rcarr|rcarnr. Throws ConfigError.
  static NeighbourhoodKind parse(std::string_view name, int tau = kDefaultTau);
};

struct Neighbourhood {
  Dag base;
  std::vector<Move> moves;
};

// Moves of a deterministic operator (rcarr/rcarnr are treated as ncr/nr).
std::vector<Move> local_moves(const Dag& g, NeighbourhoodTag tag);

Neighbourhood neighbourhood(const Dag& g, const NeighbourhoodKind& kind, Rng& rng);

// |local_moves(g, tag)|; throws ConfigError for the RCAR kinds.
std::size_t neighbourhood_size(const Dag& g, NeighbourhoodTag tag);

Dag apply_move(const Dag& g, const Move& m);
void apply_move_in_place(Dag& g, const Move& m);

struct ProposedMove {
  Dag base;
  Move move;
};

// A uniformly drawn member of neighbourhood(g, kind). Throws
// EmptyNeighbourhoodError when there is nothing to propose.
ProposedMove random_move(const Dag& g, const NeighbourhoodKind& kind, Rng& rng);

}  // namespace bnsl
