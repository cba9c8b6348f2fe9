#pragma once

// Lusztig data for elements of B(w), and the operations the extraction
// argument needs: eps*, e*max, Saito reflections and braid transitions.
//
// Indexing follows WeylWord: a[0] belongs to the first applied letter, so
// a[0] is the exponent of the rightmost PBW factor.

#include <cstddef>
#include <string>
#include <vector>

#include "nilcrystal/rootsys.hpp"

namespace nilcrystal {

class LusztigDatum {
 public:
  LusztigDatum() = default;
  /// Throws NonReducedWord, or InvalidInput on a length mismatch or a
  /// negative entry.
  LusztigDatum(CartanGraph graph, WeylWord word, std::vector<int> a);

  const CartanGraph& graph() const noexcept { return graph_; }
  const WeylWord& word() const noexcept { return word_; }
  const std::vector<int>& a() const noexcept { return a_; }
  std::size_t size() const noexcept { return a_.size(); }

  /// Same word and same tuple (not element equality; see `equal`).
  friend bool operator==(const LusztigDatum& x, const LusztigDatum& y) {
    return x.graph_ == y.graph_ && x.word_ == y.word_ && x.a_ == y.a_;
  }

 private:
  CartanGraph graph_;
  WeylWord word_;
  std::vector<int> a_;
};

inline LusztigDatum datum(const CartanGraph& g, WeylWord w, std::vector<int> a) {
  return LusztigDatum(g, std::move(w), std::move(a));
}

/// a_1. Throws InvalidInput on the empty word.
int eps_star(const LusztigDatum& d);
/// Sets a_1 to 0.
LusztigDatum e_star_max(const LusztigDatum& d);
/// Drops the first letter and entry; requires a_1 = 0 (PreconditionViolated).
LusztigDatum saito_T(const LusztigDatum& d);
/// Prepends letter i with entry 0; NonReducedWord if the result is not reduced.
LusztigDatum saito_T_inv(Vertex i, const LusztigDatum& d);

/// Commuting letters at pos, pos+1: swaps the two entries.
LusztigDatum transition_2move(const LusztigDatum& d, std::size_t pos);
/// Letters (i,j,i) at pos..pos+2 become (j,i,j); entries
/// (x,y,z) -> (y+z-p, p, x+y-p) with p = min(x,z).
LusztigDatum transition_3move(const LusztigDatum& d, std::size_t pos);
LusztigDatum apply_move(const LusztigDatum& d, MoveKind kind, std::size_t pos);

/// sum_k a_k beta_k. The crystal element has weight minus this.
RootVec weight(const LusztigDatum& d);

/// Element equality across reduced words of the same w. Throws
/// DifferentWeylElement, or CapExceeded when the braid class is too large.
bool equal(const LusztigDatum& x, const LusztigDatum& y, std::size_t cap = 200000);
/// The same element written in the lexicographically least reduced word.
LusztigDatum canonical_form(const LusztigDatum& d, std::size_t cap = 200000);

struct ExtractionStep {
  enum Kind { EStarMax, SaitoT };
  Kind kind = EStarMax;
  Vertex letter = 0;
  int exponent = 0;  // removed a_k for EStarMax, 0 for SaitoT
};

struct ExtractionCertificate {
  LusztigDatum start;
  std::vector<ExtractionStep> steps;
  /// Exponents of the e*max steps, in order.
  std::vector<int> exponents() const;
  std::size_t t_steps() const;
};

/// Alternates e*max and T until the empty datum; always r T-steps.
ExtractionCertificate extraction_chain(const LusztigDatum& d);

/// Checks the 3-move formula on fixed cases (involution, weight, known
/// images). Returns an empty string on success, else a description.
std::string transition_self_test();

}  // namespace nilcrystal
