#include <gtest/gtest.h>

#include <set>

#include "nilcrystal/errors.hpp"
#include "nilcrystal/rootsys.hpp"

using namespace nilcrystal;

namespace {

// Reflection as an explicit integer matrix acting on root coordinates,
// built from the edge list rather than the stored Cartan matrix.
std::vector<std::vector<std::int64_t>> reflection_matrix(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges, Vertex i) {
  std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t r = 0; r < n; ++r) m[r][r] = 1;
  // s_i(alpha_j) = alpha_j + (#edges i-j) alpha_i for j != i, s_i(alpha_i) = -alpha_i
  m[i][i] = -1;
  for (auto [a, b] : edges) {
    if (a == i) m[i][b] += 1;
    if (b == i) m[i][a] += 1;
  }
  return m;
}

RootVec apply(const std::vector<std::vector<std::int64_t>>& m, const RootVec& v) {
  RootVec r = RootVec::zero(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
  return r;
}

}  // namespace

TEST(ReflectRoot, A2Examples) {
  const auto g = CartanGraph::type_a(2);
  EXPECT_EQ(reflect_root(g, 0, simple_root(g, 0)), (RootVec{-1, 0}));
  EXPECT_EQ(reflect_root(g, 0, simple_root(g, 1)), (RootVec{1, 1}));
}

TEST(ReflectRoot, AffineA1DoubleEdge) {
  const auto g = CartanGraph::affine_a1();
  EXPECT_EQ(g.cartan(0, 1), -2);
  EXPECT_EQ(reflect_root(g, 0, simple_root(g, 1)), (RootVec{2, 1}));
}

TEST(ReflectRoot, InvolutionAndMatrixOracle) {
  const std::vector<std::pair<Vertex, Vertex>> edges{{0, 1}, {1, 2}, {1, 3}};
  const CartanGraph g(4, edges);
  for (Vertex i = 0; i < 4; ++i) {
    const auto m = reflection_matrix(4, edges, i);
    for (std::int64_t a = -2; a <= 2; ++a)
      for (std::int64_t b = -1; b <= 2; ++b) {
        const RootVec v{a, b, 1 - a, 2 * b};
        EXPECT_EQ(reflect_root(g, i, v), apply(m, v));
        EXPECT_EQ(reflect_root(g, i, reflect_root(g, i, v)), v);
      }
  }
}

TEST(ReflectRoot, BadVertex) {
  EXPECT_THROW(reflect_root(CartanGraph::type_a(2), 5, RootVec{0, 0}), InvalidInput);
}

TEST(ReflectWeight, A2Examples) {
  const auto g = CartanGraph::type_a(2);
  const auto w1 = fundamental_weight(g, 0), w2 = fundamental_weight(g, 1);
  EXPECT_EQ(reflect_weight(g, 0, w2), w2);
  // alpha_1 = 2w1 - w2
  EXPECT_EQ(reflect_weight(g, 0, w1), (Weight{-1, 1}));
  EXPECT_EQ(w1 - reflect_weight(g, 0, w1), root_to_weight(g, simple_root(g, 0)));
  // s2 s1 (w2): s1 fixes w2, then s2 w2 = w2 - alpha_2 ... applied order 1 then 2
  const auto x = apply_word(g, WeylWord{0, 1}, w2);
  EXPECT_EQ(w2 - x, root_to_weight(g, simple_root(g, 1)));
  EXPECT_EQ(weight_drop(g, WeylWord{0, 1}, w2), simple_root(g, 1));
  const auto y = apply_word(g, WeylWord{1, 0}, w2);
  EXPECT_EQ(w2 - y, root_to_weight(g, RootVec{1, 1}));
  EXPECT_EQ(weight_drop(g, WeylWord{1, 0}, w2), (RootVec{1, 1}));
}

TEST(ReflectWeight, Involution) {
  const auto g = CartanGraph::type_d(4);
  for (Vertex i = 0; i < 4; ++i) {
    const Weight l{3, -1, 2, 0};
    EXPECT_EQ(reflect_weight(g, i, reflect_weight(g, i, l)), l);
  }
}

TEST(BetaSequence, A2LongestWord) {
  const auto g = CartanGraph::type_a(2);
  const auto b = beta_sequence(g, WeylWord{0, 1, 0});
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], (RootVec{1, 0}));
  EXPECT_EQ(b[1], (RootVec{1, 1}));
  EXPECT_EQ(b[2], (RootVec{0, 1}));
  EXPECT_EQ(beta_sequence(g, WeylWord{1}), std::vector<RootVec>{simple_root(g, 1)});
  EXPECT_THROW(beta_sequence(g, WeylWord{0, 1, 0, 1}), NonReducedWord);
}

TEST(IsReduced, Examples) {
  const auto a2 = CartanGraph::type_a(2);
  EXPECT_TRUE(is_reduced(a2, WeylWord{0, 1, 0}));
  EXPECT_FALSE(is_reduced(a2, WeylWord{1, 1}));
  EXPECT_TRUE(is_reduced(a2, WeylWord{}));
  EXPECT_TRUE(is_reduced(CartanGraph::affine_a1(), WeylWord{0, 1, 0, 1, 0, 1}));
  EXPECT_FALSE(is_reduced(a2, WeylWord{0, 7}));
}

TEST(Mu, A2Examples) {
  const auto g = CartanGraph::type_a(2);
  const WeylWord w{0, 1, 0};
  EXPECT_EQ(mu(g, w, {1, 1, 1}), (RootVec{2, 2}));
  EXPECT_EQ(mu(g, w, {0, 0, 0}), (RootVec{0, 0}));
  EXPECT_EQ(mu(g, w, {0, 0, 1}), (RootVec{0, 1}));
  EXPECT_EQ(mu(g, w, {1, 2, 0}) + mu(g, w, {0, 1, 3}), mu(g, w, {1, 3, 3}));
  EXPECT_THROW(mu(g, w, {1, 1}), InvalidInput);
}

TEST(BraidMoves, Examples) {
  const auto a2 = CartanGraph::type_a(2);
  auto m = braid_moves(a2, WeylWord{0, 1, 0});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].kind, MoveKind::Braid);
  EXPECT_EQ(m[0].result, (WeylWord{1, 0, 1}));

  const CartanGraph a1a1(2, std::vector<std::pair<Vertex, Vertex>>{});
  m = braid_moves(a1a1, WeylWord{0, 1});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].kind, MoveKind::Commute);
  EXPECT_EQ(m[0].result, (WeylWord{1, 0}));

  EXPECT_TRUE(braid_moves(CartanGraph::affine_a1(), WeylWord{0, 1, 0}).empty());
  EXPECT_THROW(braid_moves(a2, WeylWord{0, 0}), NonReducedWord);
}

TEST(ReducedWords, A2AndSingleLetter) {
  const auto a2 = CartanGraph::type_a(2);
  const auto words = reduced_words(a2, WeylWord{0, 1, 0}, 100);
  EXPECT_EQ(words, (std::vector<WeylWord>{WeylWord{0, 1, 0}, WeylWord{1, 0, 1}}));
  EXPECT_EQ(reduced_words(a2, WeylWord{1}, 100), std::vector<WeylWord>{WeylWord{1}});
  EXPECT_THROW(reduced_words(a2, WeylWord{0, 1, 0}, 1), CapExceeded);
}

TEST(ReducedWords, A3LongestElementExhaustive) {
  const auto g = CartanGraph::type_a(3);
  const auto w0 = greedy_reduced_word(g, 100);
  ASSERT_EQ(w0.size(), 6u);
  const auto closure = reduced_words(g, w0, 1000);
  // Oracle: every word of length 6 whose action on rho matches w0.
  std::set<WeylWord> brute;
  for (std::size_t code = 0; code < 729; ++code) {
    std::vector<Vertex> l;
    for (std::size_t c = code, k = 0; k < 6; ++k, c /= 3) l.push_back(c % 3);
    if (same_element(g, WeylWord(l), w0)) brute.insert(WeylWord(l));
  }
  EXPECT_EQ(closure.size(), 16u);
  EXPECT_EQ(std::set<WeylWord>(closure.begin(), closure.end()), brute);
}

TEST(ReducedWords, BraidNeighboursShareBetaSet) {
  for (const auto& g : {CartanGraph::type_a(2), CartanGraph::type_a(3), CartanGraph::type_d(4)}) {
    for (const auto& w : all_reduced_words(g, 6)) {
      auto own = beta_sequence(g, w);
      std::sort(own.begin(), own.end());
      for (const auto& m : braid_moves(g, w)) {
        EXPECT_TRUE(same_element(g, w, m.result));
        auto other = beta_sequence(g, m.result);
        std::sort(other.begin(), other.end());
        EXPECT_EQ(own, other);
      }
    }
  }
}

TEST(AllReducedWords, A2Counts) {
  const auto g = CartanGraph::type_a(2);
  const auto words = all_reduced_words(g, 3);
  // e, 1, 2, 12, 21, 121, 212
  EXPECT_EQ(words.size(), 7u);
  EXPECT_TRUE(words.front().empty());
}

TEST(CartanGraph, FiniteType) {
  EXPECT_TRUE(CartanGraph::type_a(3).is_finite_type());
  EXPECT_TRUE(CartanGraph::type_d(4).is_finite_type());
  EXPECT_FALSE(CartanGraph::affine_a1().is_finite_type());
  EXPECT_THROW(CartanGraph(2, std::vector<std::pair<Vertex, Vertex>>{{1, 1}}), InvalidInput);
}
