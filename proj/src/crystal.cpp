#include "nilcrystal/crystal.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "nilcrystal/errors.hpp"

namespace nilcrystal {

LusztigDatum::LusztigDatum(CartanGraph graph, WeylWord word, std::vector<int> a)
    : graph_(std::move(graph)), word_(std::move(word)), a_(std::move(a)) {
  graph_.check_word(word_);
  if (a_.size() != word_.size())
    throw InvalidInput("datum length " + std::to_string(a_.size()) + " does not match word length " + std::to_string(word_.size()));
  for (auto x : a_)
    if (x < 0) throw InvalidInput("datum entries must be nonnegative");
  if (!is_reduced(graph_, word_)) throw NonReducedWord("word " + to_string(word_) + " is not reduced");
}

int eps_star(const LusztigDatum& d) {
  if (d.size() == 0) throw InvalidInput("eps_star of a datum on the empty word");
  return d.a()[0];
}

LusztigDatum e_star_max(const LusztigDatum& d) {
  if (d.size() == 0) throw InvalidInput("e_star_max of a datum on the empty word");
  auto a = d.a();
  a[0] = 0;
  return LusztigDatum(d.graph(), d.word(), std::move(a));
}

LusztigDatum saito_T(const LusztigDatum& d) {
  if (d.size() == 0) throw InvalidInput("saito_T of a datum on the empty word");
  if (d.a()[0] != 0) throw PreconditionViolated("saito_T needs a_1 = 0, got " + std::to_string(d.a()[0]));
  return LusztigDatum(d.graph(), d.word().tail(), std::vector<int>(d.a().begin() + 1, d.a().end()));
}

LusztigDatum saito_T_inv(Vertex i, const LusztigDatum& d) {
  d.graph().check_vertex(i);
  auto a = d.a();
  a.insert(a.begin(), 0);
  return LusztigDatum(d.graph(), d.word().prepended(i), std::move(a));
}

namespace {

void check_move(const LusztigDatum& d, MoveKind kind, std::size_t pos) {
  for (const auto& m : braid_moves(d.graph(), d.word()))
    if (m.position == pos && m.kind == kind) return;
  throw InvalidMovePosition(std::string(kind == MoveKind::Commute ? "2-move" : "3-move") + " not valid at position " +
                            std::to_string(pos + 1) + " of " + to_string(d.word()));
}

}  // namespace

LusztigDatum transition_2move(const LusztigDatum& d, std::size_t pos) {
  check_move(d, MoveKind::Commute, pos);
  auto letters = d.word().letters();
  auto a = d.a();
  std::swap(letters[pos], letters[pos + 1]);
  std::swap(a[pos], a[pos + 1]);
  return LusztigDatum(d.graph(), WeylWord(std::move(letters)), std::move(a));
}

LusztigDatum transition_3move(const LusztigDatum& d, std::size_t pos) {
  check_move(d, MoveKind::Braid, pos);
  auto letters = d.word().letters();
  std::swap(letters[pos], letters[pos + 1]);
  letters[pos + 2] = letters[pos];
  auto a = d.a();
  const int x = a[pos], y = a[pos + 1], z = a[pos + 2];
  const int p = std::min(x, z);
  a[pos] = y + z - p;
  a[pos + 1] = p;
  a[pos + 2] = x + y - p;
  return LusztigDatum(d.graph(), WeylWord(std::move(letters)), std::move(a));
}

LusztigDatum apply_move(const LusztigDatum& d, MoveKind kind, std::size_t pos) {
  return kind == MoveKind::Commute ? transition_2move(d, pos) : transition_3move(d, pos);
}

RootVec weight(const LusztigDatum& d) { return mu(d.graph(), d.word(), d.a()); }

namespace {

// Braid graph of one Weyl element, as a BFS tree rooted at the
// lexicographically least reduced word.
struct BraidTree {
  WeylWord root;
  struct Step {
    MoveKind kind;
    std::size_t pos;
  };
  std::map<WeylWord, Step> toward_root;
};

class TreeCache {
 public:
  std::shared_ptr<const BraidTree> get(const CartanGraph& g, const WeylWord& w, std::size_t cap) {
    const auto key = make_key(g, w);
    {
      std::shared_lock lock(mutex_);
      auto it = trees_.find(key);
      if (it != trees_.end()) return it->second;
    }
    auto tree = std::make_shared<BraidTree>(build(g, w, cap));
    std::unique_lock lock(mutex_);
    return trees_.emplace(key, std::move(tree)).first->second;
  }

 private:
  static std::string make_key(const CartanGraph& g, const WeylWord& w) {
    std::ostringstream s;
    s << g.vertex_count() << ':';
    for (const auto& e : g.edges()) s << e.tail << '-' << e.head << ',';
    s << '|' << to_string(apply_word(g, w, rho(g)));
    return s.str();
  }

  static BraidTree build(const CartanGraph& g, const WeylWord& w, std::size_t cap) {
    const auto words = reduced_words(g, w, cap);
    BraidTree t;
    t.root = words.front();
    std::deque<WeylWord> queue{t.root};
    std::map<WeylWord, bool> seen{{t.root, true}};
    while (!queue.empty()) {
      const auto cur = queue.front();
      queue.pop_front();
      for (auto& m : braid_moves(g, cur)) {
        if (seen.emplace(m.result, true).second) {
          // Each move is its own inverse at the same position.
          t.toward_root.emplace(m.result, BraidTree::Step{m.kind, m.position});
          queue.push_back(std::move(m.result));
        }
      }
    }
    return t;
  }

  std::shared_mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const BraidTree>> trees_;
};

TreeCache& tree_cache() {
  static TreeCache cache;
  return cache;
}

}  // namespace

LusztigDatum canonical_form(const LusztigDatum& d, std::size_t cap) {
  const auto tree = tree_cache().get(d.graph(), d.word(), cap);
  LusztigDatum cur = d;
  while (!(cur.word() == tree->root)) {
    const auto& step = tree->toward_root.at(cur.word());
    cur = apply_move(cur, step.kind, step.pos);
  }
  return cur;
}

bool equal(const LusztigDatum& x, const LusztigDatum& y, std::size_t cap) {
  if (!(x.graph() == y.graph())) throw GraphMismatch("data over different graphs");
  if (x.size() != y.size() || !same_element(x.graph(), x.word(), y.word()))
    throw DifferentWeylElement("words " + to_string(x.word()) + " and " + to_string(y.word()) + " name different Weyl group elements");
  if (x.word() == y.word()) return x.a() == y.a();
  return canonical_form(x, cap).a() == canonical_form(y, cap).a();
}

std::vector<int> ExtractionCertificate::exponents() const {
  std::vector<int> out;
  for (const auto& s : steps)
    if (s.kind == ExtractionStep::EStarMax) out.push_back(s.exponent);
  return out;
}

std::size_t ExtractionCertificate::t_steps() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const auto& s) { return s.kind == ExtractionStep::SaitoT; }));
}

ExtractionCertificate extraction_chain(const LusztigDatum& d) {
  ExtractionCertificate c;
  c.start = d;
  LusztigDatum cur = d;
  while (cur.size() > 0) {
    const Vertex i = cur.word()[0];
    c.steps.push_back({ExtractionStep::EStarMax, i, eps_star(cur)});
    cur = e_star_max(cur);
    c.steps.push_back({ExtractionStep::SaitoT, i, 0});
    cur = saito_T(cur);
  }
  return c;
}

std::string transition_self_test() {
  const auto g = CartanGraph::type_a(2);
  const WeylWord w{0, 1, 0};
  struct Case {
    std::vector<int> in, out;
  };
  const Case cases[] = {{{1, 0, 0}, {0, 0, 1}}, {{1, 0, 1}, {0, 1, 0}}, {{0, 0, 0}, {0, 0, 0}}, {{2, 1, 3}, {2, 2, 1}}};
  for (const auto& c : cases) {
    const LusztigDatum d(g, w, c.in);
    const auto moved = transition_3move(d, 0);
    if (moved.a() != c.out) return "3-move image mismatch on " + to_string(w);
    if (weight(moved) != weight(d)) return "3-move does not preserve weight";
    if (!(transition_3move(moved, 0) == d)) return "3-move is not an involution";
  }
  for (int x = 0; x <= 3; ++x)
    for (int y = 0; y <= 3; ++y)
      for (int z = 0; z <= 3; ++z) {
        const LusztigDatum d(g, w, {x, y, z});
        const auto moved = transition_3move(d, 0);
        if (weight(moved) != weight(d) || !(transition_3move(moved, 0) == d)) return "3-move law fails on the A2 grid";
      }
  return {};
}

}  // namespace nilcrystal
