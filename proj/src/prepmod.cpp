#include "nilcrystal/prepmod.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "nilcrystal/errors.hpp"

namespace nilcrystal {

namespace {

std::size_t as_size(std::int64_t v) { return static_cast<std::size_t>(v); }

std::string dims_text(const RootVec& d) {
  std::string s = "(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
  return s + ")";
}

}  // namespace

CartanGraph hat_graph(const CartanGraph& g) {
  const auto n = g.vertex_count();
  auto edges = g.edges();
  for (Vertex i = 0; i < n; ++i) edges.push_back({i, n + i});
  return CartanGraph(2 * n, std::move(edges));
}

template <class K>
PModule<K>::PModule(CartanGraph graph, RootVec dims, std::vector<Mat> maps)
    : graph_(std::move(graph)), dims_(std::move(dims)), maps_(std::move(maps)) {
  if (dims_.size() != graph_.vertex_count()) throw InvalidModule("dimension vector length does not match the graph");
  if (!dims_.is_nonnegative()) throw InvalidModule("negative dimension");
  if (maps_.size() != graph_.arrows().size()) throw InvalidModule("wrong number of arrow matrices");
  for (std::size_t a = 0; a < maps_.size(); ++a) {
    const auto& arr = graph_.arrows()[a];
    if (maps_[a].rows() != dim(arr.target) || maps_[a].cols() != dim(arr.source))
      throw InvalidModule("arrow " + std::to_string(arr.source + 1) + "->" + std::to_string(arr.target + 1) + " has the wrong shape");
  }
}

template <class K>
RootVec Submodule<K>::dims() const {
  RootVec d = RootVec::zero(basis.size());
  for (std::size_t v = 0; v < basis.size(); ++v) d[v] = static_cast<std::int64_t>(basis[v].cols());
  return d;
}

// In/out data at one vertex. The neighbouring spaces are stacked in the
// order of g.arrows_into(i): block b holds M_{source(arrows[b])}.
template <class K>
struct Engine<K>::Local {
  std::vector<std::size_t> arrows;
  std::vector<std::size_t> offsets;
  std::size_t tilde = 0;
  Mat in;   // dims[i] x tilde, block b = sign(h) M_h
  Mat out;  // tilde x dims[i], block b = M_{opposite(h)}
};

template <class K>
Engine<K>::Engine(K field, EngineOptions options) : field_(std::move(field)), options_(options) {}

template <class K>
typename Engine<K>::Local Engine<K>::local_data(const Module& m, Vertex i) const {
  const auto& g = m.graph();
  g.check_vertex(i);
  Local l;
  l.arrows = g.arrows_into(i);
  for (auto h : l.arrows) {
    l.offsets.push_back(l.tilde);
    l.tilde += m.dim(g.arrows()[h].source);
  }
  l.in = la::zeros(field_, m.dim(i), l.tilde);
  l.out = la::zeros(field_, l.tilde, m.dim(i));
  for (std::size_t b = 0; b < l.arrows.size(); ++b) {
    const auto h = l.arrows[b];
    const auto& mh = m.map(h);
    if (g.arrows()[h].sign > 0) {
      la::paste(l.in, mh, 0, l.offsets[b]);
    } else {
      la::paste(l.in, la::scale(field_, field_.neg(field_.one()), mh), 0, l.offsets[b]);
    }
    la::paste(l.out, m.map(opposite_arrow(h)), l.offsets[b], 0);
  }
  return l;
}

template <class K>
PModule<K> Engine<K>::checked(Module m, const char* what) const {
  if (!satisfies_relations(m))
    throw InternalRelationFailure(std::string(what) + " produced a module violating the preprojective relations, dims " + dims_text(m.dims()));
  return m;
}

// ---- construction and validation ------------------------------------------

template <class K>
PModule<K> Engine<K>::zero_module(const CartanGraph& g) const {
  std::vector<Mat> maps(g.arrows().size());
  return Module(g, RootVec::zero(g.vertex_count()), std::move(maps));
}

template <class K>
PModule<K> Engine<K>::simple(const CartanGraph& g, Vertex i) const {
  g.check_vertex(i);
  std::vector<Mat> maps;
  for (const auto& a : g.arrows()) maps.push_back(la::zeros(field_, a.target == i ? 1 : 0, a.source == i ? 1 : 0));
  return Module(g, simple_root(g, i), std::move(maps));
}

template <class K>
PModule<K> Engine<K>::make_module(CartanGraph g, RootVec dims, std::vector<Mat> maps) const {
  Module m(std::move(g), std::move(dims), std::move(maps));
  validate(m);
  return m;
}

template <class K>
void Engine<K>::validate(const Module& m) const {
  if (!satisfies_relations(m)) throw InvalidModule("module violates the preprojective relations");
  if (!is_nilpotent(m)) throw InvalidModule("module is not nilpotent");
}

template <class K>
bool Engine<K>::satisfies_relations(const Module& m) const {
  const auto& g = m.graph();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (m.dim(v) == 0) continue;
    const auto l = local_data(m, v);
    if (!la::is_zero(field_, la::multiply(field_, l.in, l.out))) return false;
  }
  return true;
}

template <class K>
bool Engine<K>::is_nilpotent(const Module& m) const {
  const auto& g = m.graph();
  const auto n = g.vertex_count();
  std::vector<Mat> layer(n);
  for (Vertex v = 0; v < n; ++v) layer[v] = la::identity(field_, m.dim(v));
  std::size_t current = m.total_dim();
  for (std::size_t step = 0; step <= m.total_dim(); ++step) {
    if (current == 0) return true;
    std::vector<Mat> next(n);
    for (Vertex v = 0; v < n; ++v) next[v] = la::zeros(field_, m.dim(v), 0);
    for (std::size_t a = 0; a < g.arrows().size(); ++a) {
      const auto& arr = g.arrows()[a];
      if (layer[arr.source].cols() == 0 || m.dim(arr.target) == 0) continue;
      next[arr.target] = la::hstack(field_, next[arr.target], la::multiply(field_, m.map(a), layer[arr.source]));
    }
    std::size_t total = 0;
    for (Vertex v = 0; v < n; ++v) {
      next[v] = la::column_basis(field_, next[v]);
      total += next[v].cols();
    }
    if (total >= current) return false;
    current = total;
    layer = std::move(next);
  }
  return current == 0;
}

template <class K>
PModule<K> Engine<K>::direct_sum(const Module& a, const Module& b) const {
  if (!(a.graph() == b.graph())) throw GraphMismatch("direct sum of modules over different graphs");
  const auto& g = a.graph();
  std::vector<Mat> maps;
  for (std::size_t x = 0; x < g.arrows().size(); ++x) {
    const auto& ma = a.map(x);
    const auto& mb = b.map(x);
    auto m = la::zeros(field_, ma.rows() + mb.rows(), ma.cols() + mb.cols());
    la::paste(m, ma, 0, 0);
    la::paste(m, mb, ma.rows(), ma.cols());
    maps.push_back(std::move(m));
  }
  return Module(g, a.dims() + b.dims(), std::move(maps));
}

template <class K>
PModule<K> Engine<K>::power(const Module& m, std::size_t copies) const {
  Module out = zero_module(m.graph());
  for (std::size_t c = 0; c < copies; ++c) out = direct_sum(out, m);
  return out;
}

// ---- socles, tops, submodules, quotients -----------------------------------

template <class K>
Submodule<K> Engine<K>::soc(const Module& m, Vertex i) const {
  const auto l = local_data(m, i);
  Sub u;
  for (Vertex v = 0; v < m.graph().vertex_count(); ++v) u.basis.push_back(la::zeros(field_, m.dim(v), 0));
  u.basis[i] = la::kernel(field_, l.out);
  return u;
}

template <class K>
std::size_t Engine<K>::soc_dim(const Module& m, Vertex i) const {
  const auto l = local_data(m, i);
  return m.dim(i) - la::rank(field_, l.out);
}

template <class K>
std::size_t Engine<K>::top_dim(const Module& m, Vertex i) const {
  const auto l = local_data(m, i);
  return m.dim(i) - la::rank(field_, l.in);
}

template <class K>
RootVec Engine<K>::socle_dims(const Module& m) const {
  RootVec d = RootVec::zero(m.graph().vertex_count());
  for (Vertex v = 0; v < d.size(); ++v) d[v] = static_cast<std::int64_t>(soc_dim(m, v));
  return d;
}

template <class K>
RootVec Engine<K>::top_dims(const Module& m) const {
  RootVec d = RootVec::zero(m.graph().vertex_count());
  for (Vertex v = 0; v < d.size(); ++v) d[v] = static_cast<std::int64_t>(top_dim(m, v));
  return d;
}

template <class K>
Submodule<K> Engine<K>::zero_submodule(const Module& m) const {
  Sub u;
  for (Vertex v = 0; v < m.graph().vertex_count(); ++v) u.basis.push_back(la::zeros(field_, m.dim(v), 0));
  return u;
}

template <class K>
Submodule<K> Engine<K>::whole_submodule(const Module& m) const {
  Sub u;
  for (Vertex v = 0; v < m.graph().vertex_count(); ++v) u.basis.push_back(la::identity(field_, m.dim(v)));
  return u;
}

template <class K>
bool Engine<K>::is_submodule(const Module& m, const Sub& u) const {
  const auto& g = m.graph();
  if (u.basis.size() != g.vertex_count()) return false;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (u.basis[v].rows() != m.dim(v)) return false;
    if (la::rank(field_, u.basis[v]) != u.basis[v].cols()) return false;
  }
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    const auto& arr = g.arrows()[a];
    const auto& src = u.basis[arr.source];
    if (src.cols() == 0 || m.dim(arr.target) == 0) continue;
    if (!la::in_column_space(field_, u.basis[arr.target], la::multiply(field_, m.map(a), src))) return false;
  }
  return true;
}

template <class K>
Quotient<K> Engine<K>::quotient(const Module& m, const Sub& u) const {
  if (!is_submodule(m, u)) throw InvalidInput("quotient: subspace is not a submodule");
  const auto& g = m.graph();
  const auto n = g.vertex_count();
  Quotient<K> q;
  std::vector<Mat> proj(n);
  RootVec dims = RootVec::zero(n);
  for (Vertex v = 0; v < n; ++v) {
    proj[v] = u.basis[v].cols() == 0 ? la::identity(field_, m.dim(v)) : la::left_null(field_, u.basis[v]);
    q.lift.push_back(la::right_inverse(field_, proj[v]));
    dims[v] = static_cast<std::int64_t>(proj[v].rows());
  }
  std::vector<Mat> maps;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    const auto& arr = g.arrows()[a];
    maps.push_back(la::multiply(field_, proj[arr.target], la::multiply(field_, m.map(a), q.lift[arr.source])));
  }
  q.module = checked(Module(g, std::move(dims), std::move(maps)), "quotient");
  q.projection.components = std::move(proj);
  return q;
}

template <class K>
PModule<K> Engine<K>::restrict_to(const Module& m, const Sub& u) const {
  if (!is_submodule(m, u)) throw InvalidInput("restrict_to: subspace is not a submodule");
  const auto& g = m.graph();
  std::vector<Mat> inv;
  for (const auto& b : u.basis) inv.push_back(la::left_inverse(field_, b));
  std::vector<Mat> maps;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    const auto& arr = g.arrows()[a];
    maps.push_back(la::multiply(field_, inv[arr.target], la::multiply(field_, m.map(a), u.basis[arr.source])));
  }
  return checked(Module(g, u.dims(), std::move(maps)), "restrict_to");
}

template <class K>
Submodule<K> Engine<K>::soc_chain(const Module& m, const std::vector<Vertex>& seq) const {
  Sub u = zero_submodule(m);
  for (auto j : seq) {
    m.graph().check_vertex(j);
    const auto q = quotient(m, u);
    const auto s = soc(q.module, j);
    if (s.basis[j].cols() == 0) continue;
    u.basis[j] = la::hstack(field_, u.basis[j], la::multiply(field_, q.lift[j], s.basis[j]));
  }
  return u;
}

template <class K>
Submodule<K> Engine<K>::image(const Map& f, const Module& target) const {
  Sub u;
  for (Vertex v = 0; v < target.graph().vertex_count(); ++v) u.basis.push_back(la::column_basis(field_, f.components.at(v)));
  return u;
}

template <class K>
Submodule<K> Engine<K>::kernel(const Map& f, const Module& source) const {
  Sub u;
  for (Vertex v = 0; v < source.graph().vertex_count(); ++v) {
    const auto& c = f.components.at(v);
    u.basis.push_back(c.rows() == 0 ? la::identity(field_, source.dim(v)) : la::kernel(field_, c));
  }
  return u;
}

// ---- reflection functors ---------------------------------------------------

template <class K>
PModule<K> Engine<K>::sigma(Vertex i, const Module& m) const {
  const auto& g = m.graph();
  const auto l = local_data(m, i);
  const Mat kern = la::kernel(field_, l.in);
  const Mat kinv = la::left_inverse(field_, kern);
  const Mat twist = options_.sign == SignConvention::Standard ? l.out : la::scale(field_, field_.neg(field_.one()), l.out);
  RootVec dims = m.dims();
  dims[i] = static_cast<std::int64_t>(kern.cols());
  std::vector<Mat> maps = m.maps();
  for (std::size_t b = 0; b < l.arrows.size(); ++b) {
    const auto h = l.arrows[b];
    const auto src_dim = m.dim(g.arrows()[h].source);
    maps[h] = la::multiply(field_, kinv, la::multiply(field_, twist, m.map(h)));
    maps[opposite_arrow(h)] = la::block(kern, l.offsets[b], src_dim, 0, kern.cols());
  }
  return checked(Module(g, std::move(dims), std::move(maps)), "sigma");
}

template <class K>
PModule<K> Engine<K>::sigma_star(Vertex i, const Module& m) const {
  const auto& g = m.graph();
  const auto l = local_data(m, i);
  const Mat proj = l.out.cols() == 0 ? la::identity(field_, l.tilde) : la::left_null(field_, l.out);
  const Mat lift = la::right_inverse(field_, proj);
  Mat twist = la::multiply(field_, l.in, lift);  // dims[i] x c
  if (options_.sign == SignConvention::Flipped) twist = la::scale(field_, field_.neg(field_.one()), twist);
  RootVec dims = m.dims();
  dims[i] = static_cast<std::int64_t>(proj.rows());
  std::vector<Mat> maps = m.maps();
  for (std::size_t b = 0; b < l.arrows.size(); ++b) {
    const auto h = l.arrows[b];
    const auto src_dim = m.dim(g.arrows()[h].source);
    Mat pb = la::block(proj, 0, proj.rows(), l.offsets[b], src_dim);
    if (g.arrows()[h].sign < 0) pb = la::scale(field_, field_.neg(field_.one()), pb);
    maps[h] = std::move(pb);
    maps[opposite_arrow(h)] = la::multiply(field_, m.map(opposite_arrow(h)), twist);
  }
  return checked(Module(g, std::move(dims), std::move(maps)), "sigma_star");
}

template <class K>
PModule<K> Engine<K>::sigma_word(const WeylWord& w, const Module& m) const {
  Module x = m;
  for (auto i : w.letters()) x = sigma(i, x);
  return x;
}

namespace {

template <class K>
la::Mat<K> tilde_map(const K& f, const ModuleMap<K>& map, const CartanGraph& g, const std::vector<std::size_t>& arrows,
                     const PModule<K>& m, const PModule<K>& n) {
  std::size_t rows = 0, cols = 0;
  for (auto h : arrows) {
    rows += n.dim(g.arrows()[h].source);
    cols += m.dim(g.arrows()[h].source);
  }
  auto t = la::zeros(f, rows, cols);
  std::size_t r = 0, c = 0;
  for (auto h : arrows) {
    const auto s = g.arrows()[h].source;
    la::paste(t, map.components.at(s), r, c);
    r += n.dim(s);
    c += m.dim(s);
  }
  return t;
}

}  // namespace

template <class K>
ModuleMap<K> Engine<K>::sigma_map(Vertex i, const Map& f, const Module& m, const Module& n) const {
  const auto lm = local_data(m, i);
  const auto ln = local_data(n, i);
  const Mat km = la::kernel(field_, lm.in);
  const Mat kn_inv = la::left_inverse(field_, la::kernel(field_, ln.in));
  Map out = f;
  out.components[i] = la::multiply(field_, kn_inv, la::multiply(field_, tilde_map(field_, f, m.graph(), lm.arrows, m, n), km));
  return out;
}

template <class K>
ModuleMap<K> Engine<K>::sigma_star_map(Vertex i, const Map& f, const Module& m, const Module& n) const {
  const auto lm = local_data(m, i);
  const auto ln = local_data(n, i);
  const Mat pm = lm.out.cols() == 0 ? la::identity(field_, lm.tilde) : la::left_null(field_, lm.out);
  const Mat pn = ln.out.cols() == 0 ? la::identity(field_, ln.tilde) : la::left_null(field_, ln.out);
  const Mat lift_m = la::right_inverse(field_, pm);
  Map out = f;
  out.components[i] = la::multiply(field_, pn, la::multiply(field_, tilde_map(field_, f, m.graph(), lm.arrows, m, n), lift_m));
  return out;
}

template <class K>
ModuleMap<K> Engine<K>::unit(Vertex i, const Module& m) const {
  const auto star = sigma_star(i, m);
  const auto l = local_data(star, i);
  const Mat kinv = la::left_inverse(field_, la::kernel(field_, l.in));
  Map u = identity_map(m);
  u.components[i] = la::multiply(field_, kinv, local_data(m, i).out);
  return u;
}

template <class K>
ModuleMap<K> Engine<K>::counit(Vertex i, const Module& m) const {
  const auto s = sigma(i, m);
  const auto l = local_data(s, i);
  const Mat p = l.out.cols() == 0 ? la::identity(field_, l.tilde) : la::left_null(field_, l.out);
  Map u = identity_map(m);
  u.components[i] = la::multiply(field_, local_data(m, i).in, la::right_inverse(field_, p));
  return u;
}

// ---- morphisms -------------------------------------------------------------

template <class K>
bool Engine<K>::is_morphism(const Map& f, const Module& source, const Module& target) const {
  const auto& g = source.graph();
  if (!(g == target.graph()) || f.components.size() != g.vertex_count()) return false;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (f.components[v].rows() != target.dim(v) || f.components[v].cols() != source.dim(v)) return false;
  }
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    const auto& arr = g.arrows()[a];
    const auto lhs = la::multiply(field_, target.map(a), f.components[arr.source]);
    const auto rhs = la::multiply(field_, f.components[arr.target], source.map(a));
    if (!la::equal(field_, lhs, rhs)) return false;
  }
  return true;
}

template <class K>
std::vector<ModuleMap<K>> Engine<K>::hom_space(const Module& source, const Module& target) const {
  const auto& g = source.graph();
  if (!(g == target.graph())) throw GraphMismatch("hom_space: modules over different graphs");
  const auto n = g.vertex_count();
  std::vector<std::size_t> offset(n + 1, 0);
  for (Vertex v = 0; v < n; ++v) offset[v + 1] = offset[v] + target.dim(v) * source.dim(v);
  const std::size_t unknowns = offset[n];
  if (unknowns == 0) return {};

  std::size_t equations = 0;
  for (const auto& arr : g.arrows()) equations += target.dim(arr.target) * source.dim(arr.source);
  auto sys = la::zeros(field_, equations, unknowns);
  std::size_t row = 0;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) {
    const auto& arr = g.arrows()[a];
    const auto s = arr.source, t = arr.target;
    const auto& na = target.map(a);  // target.dim(t) x target.dim(s)
    const auto& ma = source.map(a);  // source.dim(t) x source.dim(s)
    // (N_a f_s - f_t M_a)(r, c) = 0
    for (std::size_t r = 0; r < target.dim(t); ++r) {
      for (std::size_t c = 0; c < source.dim(s); ++c, ++row) {
        for (std::size_t k = 0; k < target.dim(s); ++k)
          sys(row, offset[s] + k * source.dim(s) + c) = field_.add(sys(row, offset[s] + k * source.dim(s) + c), na(r, k));
        for (std::size_t k = 0; k < source.dim(t); ++k)
          sys(row, offset[t] + r * source.dim(t) + k) = field_.sub(sys(row, offset[t] + r * source.dim(t) + k), ma(k, c));
      }
    }
  }
  const auto ker = la::kernel(field_, sys);
  std::vector<Map> basis;
  for (std::size_t b = 0; b < ker.cols(); ++b) {
    Map f;
    for (Vertex v = 0; v < n; ++v) {
      Mat c(target.dim(v), source.dim(v));
      for (std::size_t r = 0; r < c.rows(); ++r)
        for (std::size_t col = 0; col < c.cols(); ++col) c(r, col) = ker(offset[v] + r * source.dim(v) + col, b);
      f.components.push_back(std::move(c));
    }
    basis.push_back(std::move(f));
  }
  return basis;
}

template <class K>
ModuleMap<K> Engine<K>::random_combination(const std::vector<Map>& basis, const Module& source, const Module& target,
                                           Rng& rng) const {
  Map f;
  for (Vertex v = 0; v < source.graph().vertex_count(); ++v) f.components.push_back(la::zeros(field_, target.dim(v), source.dim(v)));
  for (const auto& b : basis) {
    const auto c = field_.random(rng);
    for (Vertex v = 0; v < f.components.size(); ++v) f.components[v] = la::add(field_, f.components[v], la::scale(field_, c, b.components[v]));
  }
  return f;
}

template <class K>
bool Engine<K>::is_injective(const Map& f, const Module& source) const {
  for (Vertex v = 0; v < source.graph().vertex_count(); ++v)
    if (la::rank(field_, f.components.at(v)) != source.dim(v)) return false;
  return true;
}

template <class K>
bool Engine<K>::is_surjective(const Map& f, const Module& target) const {
  for (Vertex v = 0; v < target.graph().vertex_count(); ++v)
    if (la::rank(field_, f.components.at(v)) != target.dim(v)) return false;
  return true;
}

template <class K>
ModuleMap<K> Engine<K>::identity_map(const Module& m) const {
  Map f;
  for (Vertex v = 0; v < m.graph().vertex_count(); ++v) f.components.push_back(la::identity(field_, m.dim(v)));
  return f;
}

template <class K>
ModuleMap<K> Engine<K>::compose(const Map& g, const Map& f) const {
  Map h;
  for (std::size_t v = 0; v < f.components.size(); ++v) h.components.push_back(la::multiply(field_, g.components.at(v), f.components[v]));
  return h;
}

template <class K>
IsoResult<K> Engine<K>::is_iso(const Module& a, const Module& b, Rng& rng) const {
  if (!(a.graph() == b.graph())) throw GraphMismatch("is_iso: modules over different graphs");
  IsoResult<K> r;
  if (a.dims() != b.dims()) return r;  // certain negative
  if (a.total_dim() == 0) {
    r.isomorphic = true;
    r.witness = identity_map(a);
    return r;
  }
  const auto basis = hom_space(a, b);
  if (basis.empty()) return r;
  // The locus of non-invertible maps is cut out by a product of determinants
  // of total degree d, so one sample misses an isomorphism with probability
  // at most d / |sample set|.
  const double log2_d = std::log2(static_cast<double>(a.total_dim()));
  const double per_trial = log2_d - field_.log2_sample_size();
  std::size_t trials = static_cast<std::size_t>(options_.retry_budget);
  if (per_trial < 0) trials = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(options_.iso_confidence_bits / -per_trial)));
  r.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    auto f = random_combination(basis, a, b, rng);
    if (is_injective(f, a)) {
      r.isomorphic = true;
      r.witness = std::move(f);
      r.trials = t + 1;
      return r;
    }
  }
  r.certain = false;
  r.log2_false_negative_bound = per_trial < 0 ? per_trial * static_cast<double>(trials) : 0.0;
  return r;
}

// ---- the module families ---------------------------------------------------

template <class K>
PModule<K> Engine<K>::semisimple_primed(const CartanGraph& g, const Weight& lambda) const {
  if (lambda.size() != g.vertex_count()) throw InvalidInput("weight has wrong length");
  if (!lambda.is_nonnegative()) throw InvalidInput("weight " + to_string(lambda) + " is not dominant");
  const auto hat = hat_graph(g);
  const auto n = g.vertex_count();
  RootVec dims = RootVec::zero(2 * n);
  for (Vertex i = 0; i < n; ++i) dims[n + i] = lambda[i];
  std::vector<Mat> maps;
  for (const auto& a : hat.arrows()) maps.push_back(la::zeros(field_, as_size(dims[a.target]), as_size(dims[a.source])));
  return Module(hat, std::move(dims), std::move(maps));
}

template <class K>
PModule<K> Engine<K>::n_hat(const CartanGraph& g, const WeylWord& w, const Weight& lambda) const {
  if (!is_reduced(g, w)) {
    g.check_word(w);
    throw NonReducedWord("word " + to_string(w) + " is not reduced");
  }
  return sigma_word(w, semisimple_primed(g, lambda));
}

template <class K>
PModule<K> Engine<K>::n_module(const CartanGraph& g, const WeylWord& w, const Weight& lambda) const {
  const auto hat = n_hat(g, w, lambda);
  const auto n = g.vertex_count();
  Sub primed;
  for (Vertex v = 0; v < 2 * n; ++v) primed.basis.push_back(v < n ? la::zeros(field_, hat.dim(v), 0) : la::identity(field_, hat.dim(v)));
  const auto q = quotient(hat, primed);
  RootVec dims = RootVec::zero(n);
  for (Vertex v = 0; v < n; ++v) dims[v] = q.module.dims()[v];
  std::vector<Mat> maps;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) maps.push_back(q.module.map(a));
  return checked(Module(g, std::move(dims), std::move(maps)), "n_module");
}

template <class K>
PModule<K> Engine<K>::v_module(const CartanGraph& g, const WeylWord& w, std::size_t k) const {
  if (k > w.size()) throw InvalidInput("v_module: index " + std::to_string(k) + " out of range");
  if (!is_reduced(g, w)) {
    g.check_word(w);
    throw NonReducedWord("word " + to_string(w) + " is not reduced");
  }
  if (k == 0) return zero_module(g);
  return n_module(g, w.prefix(k).reversed(), fundamental_weight(g, w[k - 1]));
}

template <class K>
PModule<K> Engine<K>::v_module_socle_chain(const CartanGraph& g, const WeylWord& w, std::size_t k) const {
  if (k > w.size()) throw InvalidInput("v_module_socle_chain: index out of range");
  if (k == 0) return zero_module(g);
  const auto inj = injective_hull(g, w[k - 1]);
  const auto seq = w.prefix(k).reversed().letters();
  return restrict_to(inj, soc_chain(inj, seq));
}

template <class K>
std::vector<PModule<K>> Engine<K>::m_modules(const CartanGraph& g, const WeylWord& w) const {
  if (!is_reduced(g, w)) {
    g.check_word(w);
    throw NonReducedWord("word " + to_string(w) + " is not reduced");
  }
  std::vector<Module> out;
  for (std::size_t k = 1; k <= w.size(); ++k) {
    Module x = simple(g, w[k - 1]);
    for (std::size_t l = k - 1; l-- > 0;) x = sigma(w[l], x);
    out.push_back(std::move(x));
  }
  return out;
}

template <class K>
PModule<K> Engine<K>::m_module(const CartanGraph& g, const WeylWord& w, std::size_t k, MRoute route, Rng& rng) const {
  if (k == 0 || k > w.size()) throw InvalidInput("m_module: index " + std::to_string(k) + " out of range");
  if (!is_reduced(g, w)) {
    g.check_word(w);
    throw NonReducedWord("word " + to_string(w) + " is not reduced");
  }
  if (route == MRoute::Reflection) {
    Module x = simple(g, w[k - 1]);
    for (std::size_t l = k - 1; l-- > 0;) x = sigma(w[l], x);
    return x;
  }
  std::size_t kminus = 0;
  for (std::size_t s = 1; s < k; ++s)
    if (w[s - 1] == w[k - 1]) kminus = s;
  const auto vk = v_module(g, w, k);
  if (kminus == 0) return vk;
  const auto vminus = v_module(g, w, kminus);
  const auto basis = hom_space(vminus, vk);
  for (int attempt = 0; attempt < options_.retry_budget; ++attempt) {
    const auto f = random_combination(basis, vminus, vk, rng);
    if (is_injective(f, vminus)) return quotient(vk, image(f, vk)).module;
  }
  throw NoEmbeddingFound("no injective map V_" + std::to_string(kminus) + " -> V_" + std::to_string(k) + " for word " + to_string(w));
}

template <class K>
PModule<K> Engine<K>::projective_cover(const CartanGraph& g, Vertex i) const {
  g.check_vertex(i);
  const auto n = g.vertex_count();
  const auto& arrows = g.arrows();
  // Graded pieces: dims[d][v], and the action of each arrow from degree d-1 to d.
  std::vector<std::vector<std::size_t>> dims{std::vector<std::size_t>(n, 0)};
  dims[0][i] = 1;
  std::vector<std::vector<Mat>> action{{}};  // action[d][a]: dims[d-1][s] -> dims[d][t]
  for (std::size_t d = 1;; ++d) {
    if (d > options_.max_path_degree) throw InvalidInput("projective_cover: graph is not of finite type");
    std::vector<std::size_t> next(n, 0);
    std::vector<Mat> act(arrows.size());
    for (Vertex v = 0; v < n; ++v) {
      const auto& into = g.arrows_into(v);
      std::vector<std::size_t> off;
      std::size_t free_dim = 0;
      for (auto h : into) {
        off.push_back(free_dim);
        free_dim += dims[d - 1][arrows[h].source];
      }
      // Relation images rho_v * y for y in degree d-2 at v.
      Mat rel = la::zeros(field_, free_dim, d >= 2 ? dims[d - 2][v] : 0);
      if (d >= 2) {
        for (std::size_t b = 0; b < into.size(); ++b) {
          const auto h = into[b];
          const auto& back = action[d - 1][opposite_arrow(h)];  // degree d-2 at v -> degree d-1 at source(h)
          const auto term = arrows[h].sign > 0 ? back : la::scale(field_, field_.neg(field_.one()), back);
          for (std::size_t r = 0; r < term.rows(); ++r)
            for (std::size_t c = 0; c < term.cols(); ++c) rel(off[b] + r, c) = field_.add(rel(off[b] + r, c), term(r, c));
        }
      }
      const Mat proj = rel.cols() == 0 ? la::identity(field_, free_dim) : la::left_null(field_, rel);
      next[v] = proj.rows();
      for (std::size_t b = 0; b < into.size(); ++b) {
        const auto h = into[b];
        act[h] = la::block(proj, 0, proj.rows(), off[b], dims[d - 1][arrows[h].source]);
      }
    }
    std::size_t total = 0;
    for (auto x : next) total += x;
    if (total == 0) break;
    dims.push_back(std::move(next));
    action.push_back(std::move(act));
  }
  // Assemble: vertex v carries the degrees in increasing order.
  const std::size_t degrees = dims.size();
  std::vector<std::vector<std::size_t>> start(degrees, std::vector<std::size_t>(n, 0));
  RootVec total = RootVec::zero(n);
  for (std::size_t d = 0; d < degrees; ++d)
    for (Vertex v = 0; v < n; ++v) {
      start[d][v] = as_size(total[v]);
      total[v] += static_cast<std::int64_t>(dims[d][v]);
    }
  std::vector<Mat> maps;
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    const auto s = arrows[a].source, t = arrows[a].target;
    auto m = la::zeros(field_, as_size(total[t]), as_size(total[s]));
    for (std::size_t d = 1; d < degrees; ++d) la::paste(m, action[d][a], start[d][t], start[d - 1][s]);
    maps.push_back(std::move(m));
  }
  return checked(Module(g, std::move(total), std::move(maps)), "projective_cover");
}

template <class K>
PModule<K> Engine<K>::dual(const Module& m) const {
  const auto& g = m.graph();
  std::vector<Mat> maps;
  for (std::size_t a = 0; a < g.arrows().size(); ++a) maps.push_back(la::transpose(m.map(opposite_arrow(a))));
  return checked(Module(g, m.dims(), std::move(maps)), "dual");
}

template <class K>
PModule<K> Engine<K>::injective_hull(const CartanGraph& g, Vertex i) const {
  return dual(projective_cover(g, i));
}

// ---- strata and extraction -------------------------------------------------

template <class K>
Extension<K> Engine<K>::random_extension(const Module& sub, const Module& quot, Rng& rng) const {
  const auto& g = sub.graph();
  if (!(g == quot.graph())) throw GraphMismatch("random_extension: modules over different graphs");
  const auto n = g.vertex_count();
  const auto& arrows = g.arrows();
  // Unknown block C_a : quot_{source} -> sub_{target}, row-major.
  std::vector<std::size_t> off(arrows.size() + 1, 0);
  for (std::size_t a = 0; a < arrows.size(); ++a) off[a + 1] = off[a] + sub.dim(arrows[a].target) * quot.dim(arrows[a].source);
  const std::size_t unknowns = off.back();

  Extension<K> ext;
  std::vector<typename K::Element> coeff(unknowns, field_.zero());
  if (unknowns > 0) {
    std::size_t equations = 0;
    for (Vertex v = 0; v < n; ++v) equations += sub.dim(v) * quot.dim(v);
    auto sys = la::zeros(field_, equations, unknowns);
    std::size_t row0 = 0;
    for (Vertex v = 0; v < n; ++v) {
      const auto av = sub.dim(v), bv = quot.dim(v);
      for (auto h : g.arrows_into(v)) {
        const auto hb = opposite_arrow(h);
        const auto j = arrows[h].source;
        const bool plus = arrows[h].sign > 0;
        const auto& ah = sub.map(h);    // av x sub_j
        const auto& bhb = quot.map(hb); // quot_j x bv
        // sign(h) * (A_h C_hb + C_h B_hb), entry (r, c)
        for (std::size_t r = 0; r < av; ++r)
          for (std::size_t c = 0; c < bv; ++c) {
            const auto row = row0 + r * bv + c;
            for (std::size_t k = 0; k < sub.dim(j); ++k) {
              const auto x = plus ? ah(r, k) : field_.neg(ah(r, k));
              auto& cell = sys(row, off[hb] + k * bv + c);  // C_hb is sub_j x bv
              cell = field_.add(cell, x);
            }
            for (std::size_t k = 0; k < quot.dim(j); ++k) {
              const auto x = plus ? bhb(k, c) : field_.neg(bhb(k, c));
              auto& cell = sys(row, off[h] + r * quot.dim(j) + k);  // C_h is av x quot_j
              cell = field_.add(cell, x);
            }
          }
      }
      row0 += av * bv;
    }
    const auto ker = equations == 0 ? la::identity(field_, unknowns) : la::kernel(field_, sys);
    ext.cocycle_dimension = ker.cols();
    for (std::size_t b = 0; b < ker.cols(); ++b) {
      const auto t = field_.random(rng);
      for (std::size_t u = 0; u < unknowns; ++u) coeff[u] = field_.add(coeff[u], field_.mul(t, ker(u, b)));
    }
  }

  std::vector<Mat> maps;
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    const auto s = arrows[a].source, t = arrows[a].target;
    auto m = la::zeros(field_, sub.dim(t) + quot.dim(t), sub.dim(s) + quot.dim(s));
    la::paste(m, sub.map(a), 0, 0);
    la::paste(m, quot.map(a), sub.dim(t), sub.dim(s));
    for (std::size_t r = 0; r < sub.dim(t); ++r)
      for (std::size_t c = 0; c < quot.dim(s); ++c) m(r, sub.dim(s) + c) = coeff[off[a] + r * quot.dim(s) + c];
    maps.push_back(std::move(m));
  }
  ext.module = checked(Module(g, sub.dims() + quot.dims(), std::move(maps)), "random_extension");
  for (Vertex v = 0; v < n; ++v) {
    auto inc = la::zeros(field_, sub.dim(v) + quot.dim(v), sub.dim(v));
    la::paste(inc, la::identity(field_, sub.dim(v)), 0, 0);
    auto prj = la::zeros(field_, quot.dim(v), sub.dim(v) + quot.dim(v));
    la::paste(prj, la::identity(field_, quot.dim(v)), 0, sub.dim(v));
    ext.inclusion.components.push_back(std::move(inc));
    ext.projection.components.push_back(std::move(prj));
  }
  return ext;
}

template <class K>
PModule<K> Engine<K>::build_filtered(const CartanGraph& g, const WeylWord& w, const std::vector<int>& a, Rng& rng) const {
  if (a.size() != w.size()) throw InvalidInput("datum length does not match word length");
  for (auto x : a)
    if (x < 0) throw InvalidInput("negative multiplicity in datum");
  if (!is_reduced(g, w)) {
    g.check_word(w);
    throw NonReducedWord("word " + to_string(w) + " is not reduced");
  }
  std::vector<Module> layers;
  for (std::size_t k = 1; k <= w.size(); ++k) {
    if (a[k - 1] == 0) {
      layers.push_back(zero_module(g));
      continue;
    }
    Module x = simple(g, w[k - 1]);
    for (std::size_t l = k - 1; l-- > 0;) x = sigma(w[l], x);
    layers.push_back(std::move(x));
  }
  return build_filtered(g, layers, a, rng);
}

template <class K>
PModule<K> Engine<K>::build_filtered(const CartanGraph& g, const std::vector<Module>& layers, const std::vector<int>& a,
                                     Rng& rng) const {
  if (a.size() != layers.size()) throw InvalidInput("datum length does not match the number of layers");
  Module x = zero_module(g);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < 0) throw InvalidInput("negative multiplicity in datum");
    if (a[k] == 0) continue;
    x = random_extension(x, power(layers[k], static_cast<std::size_t>(a[k])), rng).module;
  }
  return x;
}

template <class K>
ExtractionResult Engine<K>::extract_datum(const CartanGraph& g, const WeylWord& w, const Module& x) const {
  if (!(x.graph() == g)) throw GraphMismatch("extract_datum: module over a different graph");
  if (!is_reduced(g, w)) {
    g.check_word(w);
    throw NonReducedWord("word " + to_string(w) + " is not reduced");
  }
  ExtractionResult r;
  Module cur = x;
  for (auto i : w.letters()) {
    r.datum.push_back(static_cast<int>(soc_dim(cur, i)));
    cur = sigma_star(i, cur);
  }
  r.residual = cur.dims();
  r.ok = cur.is_zero();
  return r;
}

template class PModule<PrimeField>;
template class PModule<RationalField>;
template struct Submodule<PrimeField>;
template struct Submodule<RationalField>;
template class Engine<PrimeField>;
template class Engine<RationalField>;

}  // namespace nilcrystal
