#pragma once

// Finite-dimensional nilpotent modules over the preprojective algebra of a
// CartanGraph, and the constructions built from them: socles and tops,
// quotients, the reflection functors, the modules N(w lambda), V_{i,k} and
// M_{i,k}, stratum sampling and datum extraction.
//
// A module assigns a space of dimension dims[v] to every vertex and a matrix
// to every arrow of the double quiver (see Arrow in rootsys.hpp). The matrix
// of arrow a: s -> t has shape dims[t] x dims[s]. The relation at vertex v is
//
//     sum_{h : target(h) = v} sign(h) * M_h * M_{opposite(h)} = 0.
//
// All work is exact. Engine<K> bundles a coefficient field with the handful
// of knobs the constructions need; it is cheap to copy and holds no mutable
// state, so one engine can serve many threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nilcrystal/field.hpp"
#include "nilcrystal/linalg.hpp"
#include "nilcrystal/rootsys.hpp"

namespace nilcrystal {

template <class K>
class PModule {
 public:
  using Mat = la::Mat<K>;

  PModule() = default;
  /// Shape-checked only; Engine::validate checks relations and nilpotency.
  PModule(CartanGraph graph, RootVec dims, std::vector<Mat> maps);

  const CartanGraph& graph() const noexcept { return graph_; }
  const RootVec& dims() const noexcept { return dims_; }
  std::size_t dim(Vertex v) const { return static_cast<std::size_t>(dims_[v]); }
  std::size_t total_dim() const { return static_cast<std::size_t>(dims_.total()); }
  bool is_zero() const { return dims_.is_zero(); }
  const Mat& map(std::size_t arrow) const { return maps_.at(arrow); }
  const std::vector<Mat>& maps() const noexcept { return maps_; }

 private:
  CartanGraph graph_;
  RootVec dims_;
  std::vector<Mat> maps_;
};

/// One matrix per vertex, shape target.dim(v) x source.dim(v).
template <class K>
struct ModuleMap {
  std::vector<la::Mat<K>> components;
};

/// Per-vertex column bases of an arrow-closed subspace.
template <class K>
struct Submodule {
  std::vector<la::Mat<K>> basis;
  RootVec dims() const;
  bool is_zero() const { return dims().is_zero(); }
};

template <class K>
struct Quotient {
  PModule<K> module;
  ModuleMap<K> projection;
  /// Per-vertex right inverses of the projection.
  std::vector<la::Mat<K>> lift;
};

template <class K>
struct Extension {
  PModule<K> module;
  ModuleMap<K> inclusion;
  ModuleMap<K> projection;
  std::size_t cocycle_dimension = 0;
};

template <class K>
struct IsoResult {
  bool isomorphic = false;
  std::optional<ModuleMap<K>> witness;
  /// False only for a probabilistic negative answer.
  bool certain = true;
  std::size_t trials = 0;
  /// log2 of the false-negative probability bound when !certain.
  double log2_false_negative_bound = 0.0;
};

/// Outcome of reading a datum off a module along a word.
struct ExtractionResult {
  bool ok = false;          // false: NotInGenericStratum
  std::vector<int> datum;   // always r entries (socle reads)
  RootVec residual;         // dimension vector left after r steps
};

enum class MRoute { Cokernel, Reflection };

enum class SignConvention {
  Standard,
  /// Negates the structure map twisted by the reflection functors. Test mode
  /// only: exists so the contract suite can prove it notices.
  Flipped,
};

struct EngineOptions {
  SignConvention sign = SignConvention::Standard;
  /// Attempts for each probabilistic search before giving up.
  int retry_budget = 8;
  /// Target: false-negative probability of is_iso at most 2^-bits.
  double iso_confidence_bits = 40.0;
  /// Degree cap for the graded construction of indecomposable projectives.
  std::size_t max_path_degree = 64;
};

/// Graph with one extra vertex n+i and an edge i -> n+i for every vertex i.
CartanGraph hat_graph(const CartanGraph& g);

template <class K>
class Engine {
 public:
  using Mat = la::Mat<K>;
  using Module = PModule<K>;
  using Map = ModuleMap<K>;
  using Sub = Submodule<K>;

  explicit Engine(K field = K{}, EngineOptions options = {});

  const K& field() const noexcept { return field_; }
  const EngineOptions& options() const noexcept { return options_; }

  // ---- construction and validation --------------------------------------

  Module zero_module(const CartanGraph& g) const;
  Module simple(const CartanGraph& g, Vertex i) const;
  /// Validated construction; throws InvalidModule.
  Module make_module(CartanGraph g, RootVec dims, std::vector<Mat> maps) const;
  void validate(const Module& m) const;
  bool satisfies_relations(const Module& m) const;
  /// Radical series reaches zero within total-dimension steps.
  bool is_nilpotent(const Module& m) const;

  Module direct_sum(const Module& a, const Module& b) const;
  Module power(const Module& m, std::size_t copies) const;

  // ---- socles, tops, submodules, quotients ------------------------------

  /// S_i-isotypic part of the socle: kernel of all arrows leaving i.
  Sub soc(const Module& m, Vertex i) const;
  std::size_t soc_dim(const Module& m, Vertex i) const;
  /// dim M_i - rank of the sum of all arrows entering i.
  std::size_t top_dim(const Module& m, Vertex i) const;
  RootVec socle_dims(const Module& m) const;
  RootVec top_dims(const Module& m) const;

  Sub zero_submodule(const Module& m) const;
  Sub whole_submodule(const Module& m) const;
  bool is_submodule(const Module& m, const Sub& u) const;
  /// Throws InvalidInput if u is not arrow-closed.
  Quotient<K> quotient(const Module& m, const Sub& u) const;
  /// The submodule as a module in its own right.
  Module restrict_to(const Module& m, const Sub& u) const;
  /// soc_{(j_1,...,j_t)}(M): iterated socle pieces pulled back.
  Sub soc_chain(const Module& m, const std::vector<Vertex>& seq) const;

  Sub image(const Map& f, const Module& target) const;
  Sub kernel(const Map& f, const Module& source) const;

  // ---- reflection functors -----------------------------------------------

  /// Sigma_i: replaces M_i by the kernel of the map into M_i from the
  /// neighbouring spaces.
  Module sigma(Vertex i, const Module& m) const;
  /// Sigma_i^*: replaces M_i by the cokernel of the map out of M_i.
  Module sigma_star(Vertex i, const Module& m) const;
  /// Applies sigma for letters[0], then letters[1], ...
  Module sigma_word(const WeylWord& w, const Module& m) const;

  /// Sigma_i(f) : Sigma_i M -> Sigma_i N.
  Map sigma_map(Vertex i, const Map& f, const Module& m, const Module& n) const;
  Map sigma_star_map(Vertex i, const Map& f, const Module& m, const Module& n) const;
  /// Natural map M -> Sigma_i Sigma_i^* M (kernel soc_i M).
  Map unit(Vertex i, const Module& m) const;
  /// Natural map Sigma_i^* Sigma_i M -> M (cokernel top_i M).
  Map counit(Vertex i, const Module& m) const;

  // ---- morphisms ---------------------------------------------------------

  bool is_morphism(const Map& f, const Module& source, const Module& target) const;
  std::vector<Map> hom_space(const Module& source, const Module& target) const;
  Map random_combination(const std::vector<Map>& basis, const Module& source, const Module& target, Rng& rng) const;
  bool is_injective(const Map& f, const Module& source) const;
  bool is_surjective(const Map& f, const Module& target) const;
  Map identity_map(const Module& m) const;
  Map compose(const Map& g, const Map& f) const;  // g after f
  /// Randomized; a positive answer carries an explicit invertible witness.
  IsoResult<K> is_iso(const Module& a, const Module& b, Rng& rng) const;

  // ---- the module families -----------------------------------------------

  /// Module over hat_graph(g) with dimension vector (0, lambda), zero maps.
  Module semisimple_primed(const CartanGraph& g, const Weight& lambda) const;
  /// Sigma_{i_r} ... Sigma_{i_1} applied to semisimple_primed(g, lambda).
  Module n_hat(const CartanGraph& g, const WeylWord& w, const Weight& lambda) const;
  /// n_hat modulo its primed part, as a module over g.
  Module n_module(const CartanGraph& g, const WeylWord& w, const Weight& lambda) const;
  /// V_{i,k} = N(s_{i_1} ... s_{i_k} w_{i_k}); k = 0 gives the zero module.
  Module v_module(const CartanGraph& g, const WeylWord& w, std::size_t k) const;
  /// V_{i,k} as an iterated socle of the injective hull of S_{i_k}.
  /// Finite type only.
  Module v_module_socle_chain(const CartanGraph& g, const WeylWord& w, std::size_t k) const;
  /// M_{i,k}, 1 <= k <= r.
  Module m_module(const CartanGraph& g, const WeylWord& w, std::size_t k, MRoute route, Rng& rng) const;
  /// M_{i,1}, ..., M_{i,r} by the reflection route.
  std::vector<Module> m_modules(const CartanGraph& g, const WeylWord& w) const;

  /// Indecomposable projective with top S_i (finite type only).
  Module projective_cover(const CartanGraph& g, Vertex i) const;
  /// Indecomposable injective with socle S_i (finite type only).
  Module injective_hull(const CartanGraph& g, Vertex i) const;
  /// Vector-space dual with every arrow replaced by the transpose of its opposite.
  Module dual(const Module& m) const;

  // ---- strata and extraction ---------------------------------------------

  /// Uniformly random extension 0 -> sub -> E -> quot -> 0.
  Extension<K> random_extension(const Module& sub, const Module& quot, Rng& rng) const;
  /// A sample of the stratum: successive random extensions by M_{i,k}^{a_k}.
  Module build_filtered(const CartanGraph& g, const WeylWord& w, const std::vector<int>& a, Rng& rng) const;
  /// Same, with the layer modules supplied (as returned by m_modules).
  Module build_filtered(const CartanGraph& g, const std::vector<Module>& layers, const std::vector<int>& a, Rng& rng) const;
  /// a_k = dim soc_{i_k}(X), then X := Sigma_{i_k}^* X, for k = 1..r.
  ExtractionResult extract_datum(const CartanGraph& g, const WeylWord& w, const Module& x) const;

  std::size_t eps_star_mod(Vertex i, const Module& x) const { return soc_dim(x, i); }
  std::size_t eps_mod(Vertex i, const Module& x) const { return top_dim(x, i); }

 private:
  struct Local;
  Local local_data(const Module& m, Vertex i) const;
  Module checked(Module m, const char* what) const;

  K field_;
  EngineOptions options_;
};

extern template class PModule<PrimeField>;
extern template class PModule<RationalField>;
extern template class Engine<PrimeField>;
extern template class Engine<RationalField>;
extern template struct Submodule<PrimeField>;
extern template struct Submodule<RationalField>;

}  // namespace nilcrystal
