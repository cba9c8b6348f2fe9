#pragma once

// Cartan data of a loop-free multigraph and the Weyl-group combinatorics
// built on it: reflections, reduced words, braid moves, root sequences.
//
// Conventions
//   * Vertices are 0-based in the C++ API; file formats and the CLI use
//     1-based labels.
//   * A WeylWord stores letters in application order: letters[0] is the
//     first reflection applied. The element it names is
//       w = s_{letters[r-1]} ... s_{letters[1]} s_{letters[0]}.
//     Displays that list the leftmost factor first show the reverse.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace nilcrystal {

using Vertex = std::size_t;

/// Integer vector tagged with the basis it is written in.
template <class Basis>
class IntVec {
 public:
  IntVec() = default;
  explicit IntVec(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) {}
  IntVec(std::initializer_list<std::int64_t> coeffs) : c_(coeffs) {}

  static IntVec zero(std::size_t n) { return IntVec(std::vector<std::int64_t>(n, 0)); }
  static IntVec unit(std::size_t n, std::size_t i) {
    auto v = zero(n);
    v.c_.at(i) = 1;
    return v;
  }

  std::size_t size() const noexcept { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  std::int64_t& operator[](std::size_t i) { return c_[i]; }
  const std::vector<std::int64_t>& coeffs() const noexcept { return c_; }

  bool is_zero() const noexcept {
    for (auto x : c_)
      if (x != 0) return false;
    return true;
  }
  bool is_nonnegative() const noexcept {
    for (auto x : c_)
      if (x < 0) return false;
    return true;
  }
  /// Nonnegative and not zero.
  bool is_positive() const noexcept { return is_nonnegative() && !is_zero(); }
  std::int64_t total() const noexcept {
    std::int64_t s = 0;
    for (auto x : c_) s += x;
    return s;
  }

  IntVec& operator+=(const IntVec& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_.at(i);
    return *this;
  }
  IntVec& operator-=(const IntVec& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_.at(i);
    return *this;
  }
  friend IntVec operator+(IntVec a, const IntVec& b) { return a += b; }
  friend IntVec operator-(IntVec a, const IntVec& b) { return a -= b; }
  friend IntVec operator*(std::int64_t s, IntVec a) {
    for (auto& x : a.c_) x *= s;
    return a;
  }
  friend IntVec operator-(IntVec a) { return std::int64_t{-1} * std::move(a); }
  friend bool operator==(const IntVec&, const IntVec&) = default;
  friend auto operator<=>(const IntVec&, const IntVec&) = default;

 private:
  std::vector<std::int64_t> c_;
};

struct SimpleRootBasis;
struct FundamentalWeightBasis;

/// Coefficients in the simple-root basis; also dimension vectors.
using RootVec = IntVec<SimpleRootBasis>;
/// Coefficients in the fundamental-weight basis.
using Weight = IntVec<FundamentalWeightBasis>;

std::string to_string(const RootVec& v);  // "a1 + 2a2", "0", "-a1"
std::string to_string(const Weight& v);   // "w1 - w2"
std::ostream& operator<<(std::ostream& os, const RootVec& v);
std::ostream& operator<<(std::ostream& os, const Weight& v);

class WeylWord {
 public:
  WeylWord() = default;
  explicit WeylWord(std::vector<Vertex> letters) : letters_(std::move(letters)) {}
  WeylWord(std::initializer_list<Vertex> letters) : letters_(letters) {}

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Vertex operator[](std::size_t k) const { return letters_[k]; }
  const std::vector<Vertex>& letters() const noexcept { return letters_; }

  WeylWord prefix(std::size_t len) const;
  /// Drops the first applied letter.
  WeylWord tail() const;
  WeylWord reversed() const;
  WeylWord prepended(Vertex i) const;
  WeylWord appended(Vertex i) const;

  friend bool operator==(const WeylWord&, const WeylWord&) = default;
  friend auto operator<=>(const WeylWord&, const WeylWord&) = default;

 private:
  std::vector<Vertex> letters_;
};

/// "(1,2,1)" with 1-based labels, application order.
std::string to_string(const WeylWord& w);
std::ostream& operator<<(std::ostream& os, const WeylWord& w);

/// An edge with a chosen direction tail -> head.
struct OrientedEdge {
  Vertex tail = 0;
  Vertex head = 0;
  friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
};

/// One arrow of the double quiver. Edge e contributes arrow 2e (tail -> head,
/// sign +1) and arrow 2e+1 (head -> tail, sign -1).
struct Arrow {
  Vertex source = 0;
  Vertex target = 0;
  std::size_t edge = 0;
  int sign = 1;
};

inline std::size_t opposite_arrow(std::size_t a) noexcept { return a ^ 1u; }

class CartanGraph {
 public:
  CartanGraph() = default;
  /// Edges given as pairs; each is oriented from the smaller to the larger vertex.
  CartanGraph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges);
  /// Edges with an explicit orientation.
  CartanGraph(std::size_t n, std::vector<OrientedEdge> edges);

  static CartanGraph type_a(std::size_t n);
  /// D_n: path 0-1-...-(n-2) plus an edge (n-3)-(n-1). For D_4 the branch
  /// point is vertex 1 (label 2).
  static CartanGraph type_d(std::size_t n);
  /// Two vertices joined by two edges.
  static CartanGraph affine_a1();

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<OrientedEdge>& edges() const noexcept { return edges_; }
  const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
  /// Arrow ids with the given target, ascending.
  const std::vector<std::size_t>& arrows_into(Vertex v) const { return into_.at(v); }

  /// Derived Cartan matrix entry: 2 on the diagonal, minus the edge count off it.
  int cartan(Vertex i, Vertex j) const { return cartan_.at(i * n_ + j); }
  int edges_between(Vertex i, Vertex j) const { return i == j ? 0 : -cartan(i, j); }

  void check_vertex(Vertex v) const;
  void check_word(const WeylWord& w) const;

  /// Positive-definite Cartan matrix (finite type ADE).
  bool is_finite_type() const;

  friend bool operator==(const CartanGraph& a, const CartanGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void build();

  std::size_t n_ = 0;
  std::vector<OrientedEdge> edges_;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<std::size_t>> into_;
  std::vector<int> cartan_;
};

RootVec simple_root(const CartanGraph& g, Vertex i);
Weight fundamental_weight(const CartanGraph& g, Vertex i);
/// Sum of all fundamental weights; its stabilizer in W is trivial.
Weight rho(const CartanGraph& g);

RootVec reflect_root(const CartanGraph& g, Vertex i, const RootVec& v);
Weight reflect_weight(const CartanGraph& g, Vertex i, const Weight& lambda);
/// Image of a root-lattice vector in the weight basis (multiplication by A).
Weight root_to_weight(const CartanGraph& g, const RootVec& v);

/// w(lambda), applying letters in storage order.
Weight apply_word(const CartanGraph& g, const WeylWord& w, const Weight& lambda);
/// lambda - w(lambda) in the root basis, accumulated exactly reflection by reflection.
RootVec weight_drop(const CartanGraph& g, const WeylWord& w, const Weight& lambda);

/// beta_k = s_{i_1} ... s_{i_{k-1}}(alpha_{i_k}), k = 1..r. Throws
/// NonReducedWord when some beta_k is not a positive root.
std::vector<RootVec> beta_sequence(const CartanGraph& g, const WeylWord& w);
bool is_reduced(const CartanGraph& g, const WeylWord& w);
/// Appending i keeps w reduced, i.e. l(s_i w) > l(w).
bool extends_reduced(const CartanGraph& g, const WeylWord& w, Vertex i);

/// sum_k a_k beta_k.
RootVec mu(const CartanGraph& g, const WeylWord& w, const std::vector<int>& a);

/// Both words name the same Weyl group element.
bool same_element(const CartanGraph& g, const WeylWord& a, const WeylWord& b);

enum class MoveKind { Commute, Braid };  // 2-move, 3-move

struct BraidMove {
  std::size_t position = 0;  // storage index of the first letter involved
  MoveKind kind = MoveKind::Commute;
  WeylWord result;
};

std::vector<BraidMove> braid_moves(const CartanGraph& g, const WeylWord& w);

/// All reduced words of the element named by w (closure under braid moves),
/// sorted lexicographically. Throws CapExceeded past `cap` words.
std::vector<WeylWord> reduced_words(const CartanGraph& g, const WeylWord& w, std::size_t cap);

/// Every reduced word of length <= max_len (the empty word included),
/// shortest first, lexicographic within a length.
std::vector<WeylWord> all_reduced_words(const CartanGraph& g, std::size_t max_len);

/// Lexicographically greedy reduced word of length min(max_len, l(w_0)).
WeylWord greedy_reduced_word(const CartanGraph& g, std::size_t max_len);

}  // namespace nilcrystal
