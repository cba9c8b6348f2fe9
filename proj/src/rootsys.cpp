#include "nilcrystal/rootsys.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>
#include <sstream>

#include <gmpxx.h>

#include "nilcrystal/errors.hpp"

namespace nilcrystal {

namespace {

template <class V>
std::string format_vec(const V& v, char symbol) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto c = v[i];
    if (c == 0) continue;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    const auto m = c < 0 ? -c : c;
    if (m != 1) out << m;
    out << symbol << (i + 1);
    first = false;
  }
  return first ? "0" : out.str();
}

}  // namespace

std::string to_string(const RootVec& v) { return format_vec(v, 'a'); }
std::string to_string(const Weight& v) { return format_vec(v, 'w'); }
std::ostream& operator<<(std::ostream& os, const RootVec& v) { return os << to_string(v); }
std::ostream& operator<<(std::ostream& os, const Weight& v) { return os << to_string(v); }

WeylWord WeylWord::prefix(std::size_t len) const {
  return WeylWord(std::vector<Vertex>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(len, letters_.size()))));
}

WeylWord WeylWord::tail() const {
  if (letters_.empty()) return {};
  return WeylWord(std::vector<Vertex>(letters_.begin() + 1, letters_.end()));
}

WeylWord WeylWord::reversed() const { return WeylWord(std::vector<Vertex>(letters_.rbegin(), letters_.rend())); }

WeylWord WeylWord::prepended(Vertex i) const {
  std::vector<Vertex> l;
  l.reserve(letters_.size() + 1);
  l.push_back(i);
  l.insert(l.end(), letters_.begin(), letters_.end());
  return WeylWord(std::move(l));
}

WeylWord WeylWord::appended(Vertex i) const {
  auto l = letters_;
  l.push_back(i);
  return WeylWord(std::move(l));
}

std::string to_string(const WeylWord& w) {
  std::string s = "(";
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(w[k] + 1);
  }
  return s + ")";
}

std::ostream& operator<<(std::ostream& os, const WeylWord& w) { return os << to_string(w); }

CartanGraph::CartanGraph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) : n_(n) {
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) edges_.push_back({std::min(a, b), std::max(a, b)});
  build();
}

CartanGraph::CartanGraph(std::size_t n, std::vector<OrientedEdge> edges) : n_(n), edges_(std::move(edges)) { build(); }

void CartanGraph::build() {
  cartan_.assign(n_ * n_, 0);
  into_.assign(n_, {});
  arrows_.clear();
  for (std::size_t v = 0; v < n_; ++v) cartan_[v * n_ + v] = 2;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [t, h] = edges_[e];
    if (t >= n_ || h >= n_) throw InvalidInput("edge endpoint out of range");
    if (t == h) throw InvalidInput("graph has a loop at vertex " + std::to_string(t + 1));
    cartan_[t * n_ + h] -= 1;
    cartan_[h * n_ + t] -= 1;
    arrows_.push_back({t, h, e, +1});
    arrows_.push_back({h, t, e, -1});
  }
  for (std::size_t a = 0; a < arrows_.size(); ++a) into_[arrows_[a].target].push_back(a);
}

CartanGraph CartanGraph::type_a(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return CartanGraph(n, e);
}

CartanGraph CartanGraph::type_d(std::size_t n) {
  if (n < 4) throw InvalidInput("D_n needs n >= 4");
  std::vector<std::pair<Vertex, Vertex>> e;
  for (std::size_t i = 0; i + 2 < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(n - 3, n - 1);
  return CartanGraph(n, e);
}

CartanGraph CartanGraph::affine_a1() { return CartanGraph(2, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {0, 1}}); }

void CartanGraph::check_vertex(Vertex v) const {
  if (v >= n_) throw InvalidInput("invalid vertex index " + std::to_string(v + 1) + " (graph has " + std::to_string(n_) + " vertices)");
}

void CartanGraph::check_word(const WeylWord& w) const {
  for (auto v : w.letters()) check_vertex(v);
}

bool CartanGraph::is_finite_type() const {
  // Sylvester: all pivots of symmetric elimination are positive.
  std::vector<mpq_class> a(n_ * n_);
  for (std::size_t i = 0; i < n_ * n_; ++i) a[i] = cartan_[i];
  for (std::size_t k = 0; k < n_; ++k) {
    const mpq_class piv = a[k * n_ + k];
    if (sgn(piv) <= 0) return false;
    for (std::size_t i = k + 1; i < n_; ++i) {
      const mpq_class f = a[i * n_ + k] / piv;
      for (std::size_t j = k; j < n_; ++j) a[i * n_ + j] -= f * a[k * n_ + j];
    }
  }
  return true;
}

RootVec simple_root(const CartanGraph& g, Vertex i) {
  g.check_vertex(i);
  return RootVec::unit(g.vertex_count(), i);
}

Weight fundamental_weight(const CartanGraph& g, Vertex i) {
  g.check_vertex(i);
  return Weight::unit(g.vertex_count(), i);
}

Weight rho(const CartanGraph& g) { return Weight(std::vector<std::int64_t>(g.vertex_count(), 1)); }

RootVec reflect_root(const CartanGraph& g, Vertex i, const RootVec& v) {
  g.check_vertex(i);
  if (v.size() != g.vertex_count()) throw InvalidInput("root vector has wrong length");
  std::int64_t pairing = 0;  // <v, alpha_i^vee>
  for (std::size_t j = 0; j < v.size(); ++j) pairing += g.cartan(i, j) * v[j];
  RootVec r = v;
  r[i] -= pairing;
  return r;
}

Weight reflect_weight(const CartanGraph& g, Vertex i, const Weight& lambda) {
  g.check_vertex(i);
  if (lambda.size() != g.vertex_count()) throw InvalidInput("weight has wrong length");
  // s_i(lambda) = lambda - lambda_i alpha_i, and alpha_i = sum_j A_ji w_j.
  Weight r = lambda;
  const auto li = lambda[i];
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= li * g.cartan(j, i);
  return r;
}

Weight root_to_weight(const CartanGraph& g, const RootVec& v) {
  const auto n = g.vertex_count();
  Weight w = Weight::zero(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) w[j] += g.cartan(j, i) * v[i];
  return w;
}

Weight apply_word(const CartanGraph& g, const WeylWord& w, const Weight& lambda) {
  Weight x = lambda;
  for (auto i : w.letters()) x = reflect_weight(g, i, x);
  return x;
}

RootVec weight_drop(const CartanGraph& g, const WeylWord& w, const Weight& lambda) {
  RootVec drop = RootVec::zero(g.vertex_count());
  Weight x = lambda;
  for (auto i : w.letters()) {
    drop[i] += x[i];
    x = reflect_weight(g, i, x);
  }
  return drop;
}

namespace {

RootVec beta_at(const CartanGraph& g, const WeylWord& w, std::size_t k) {
  RootVec b = simple_root(g, w[k]);
  for (std::size_t j = k; j-- > 0;) b = reflect_root(g, w[j], b);
  return b;
}

}  // namespace

std::vector<RootVec> beta_sequence(const CartanGraph& g, const WeylWord& w) {
  g.check_word(w);
  std::vector<RootVec> out;
  out.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    auto b = beta_at(g, w, k);
    if (!b.is_positive())
      throw NonReducedWord("word " + to_string(w) + " is not reduced: beta_" + std::to_string(k + 1) + " = " + to_string(b));
    out.push_back(std::move(b));
  }
  return out;
}

bool is_reduced(const CartanGraph& g, const WeylWord& w) {
  for (auto v : w.letters())
    if (v >= g.vertex_count()) return false;
  for (std::size_t k = 0; k < w.size(); ++k)
    if (!beta_at(g, w, k).is_positive()) return false;
  return true;
}

bool extends_reduced(const CartanGraph& g, const WeylWord& w, Vertex i) {
  g.check_vertex(i);
  return beta_at(g, w.appended(i), w.size()).is_positive();
}

RootVec mu(const CartanGraph& g, const WeylWord& w, const std::vector<int>& a) {
  if (a.size() != w.size())
    throw InvalidInput("datum length " + std::to_string(a.size()) + " does not match word length " + std::to_string(w.size()));
  const auto betas = beta_sequence(g, w);
  RootVec m = RootVec::zero(g.vertex_count());
  for (std::size_t k = 0; k < a.size(); ++k) m += std::int64_t{a[k]} * betas[k];
  return m;
}

bool same_element(const CartanGraph& g, const WeylWord& a, const WeylWord& b) {
  const auto r = rho(g);
  return apply_word(g, a, r) == apply_word(g, b, r);
}

std::vector<BraidMove> braid_moves(const CartanGraph& g, const WeylWord& w) {
  if (!is_reduced(g, w)) {
    g.check_word(w);
    throw NonReducedWord("word " + to_string(w) + " is not reduced");
  }
  std::vector<BraidMove> moves;
  const auto& l = w.letters();
  for (std::size_t p = 0; p + 1 < l.size(); ++p) {
    const Vertex i = l[p];
    const Vertex j = l[p + 1];
    if (i != j && g.cartan(i, j) == 0) {
      auto m = l;
      std::swap(m[p], m[p + 1]);
      moves.push_back({p, MoveKind::Commute, WeylWord(std::move(m))});
    }
    if (p + 2 < l.size() && l[p + 2] == i && i != j && g.cartan(i, j) == -1) {
      auto m = l;
      m[p] = j;
      m[p + 1] = i;
      m[p + 2] = j;
      moves.push_back({p, MoveKind::Braid, WeylWord(std::move(m))});
    }
  }
  return moves;
}

std::vector<WeylWord> reduced_words(const CartanGraph& g, const WeylWord& w, std::size_t cap) {
  std::set<WeylWord> seen{w};
  std::deque<WeylWord> queue{w};
  if (seen.size() > cap) throw CapExceeded("reduced-word closure exceeds cap " + std::to_string(cap));
  while (!queue.empty()) {
    const WeylWord cur = std::move(queue.front());
    queue.pop_front();
    for (auto& m : braid_moves(g, cur)) {
      if (seen.insert(m.result).second) {
        if (seen.size() > cap) throw CapExceeded("reduced-word closure exceeds cap " + std::to_string(cap));
        queue.push_back(std::move(m.result));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<WeylWord> all_reduced_words(const CartanGraph& g, std::size_t max_len) {
  std::vector<WeylWord> out{WeylWord{}};
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t idx = level_begin; idx < level_end; ++idx) {
      for (Vertex i = 0; i < g.vertex_count(); ++i) {
        if (extends_reduced(g, out[idx], i)) out.push_back(out[idx].appended(i));
      }
    }
    level_begin = level_end;
    if (level_begin == out.size()) break;
  }
  return out;
}

WeylWord greedy_reduced_word(const CartanGraph& g, std::size_t max_len) {
  WeylWord w;
  while (w.size() < max_len) {
    bool grew = false;
    for (Vertex i = 0; i < g.vertex_count(); ++i) {
      if (extends_reduced(g, w, i)) {
        w = w.appended(i);
        grew = true;
        break;
      }
    }
    if (!grew) break;
  }
  return w;
}

}  // namespace nilcrystal
