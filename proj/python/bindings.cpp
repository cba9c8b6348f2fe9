// Python bindings. Vertices and word letters are 0-based here, as in C++.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nilcrystal/crystal.hpp"
#include "nilcrystal/errors.hpp"
#include "nilcrystal/io.hpp"
#include "nilcrystal/veritas.hpp"

namespace py = pybind11;
using namespace nilcrystal;

namespace {

py::object from_json(const OrderedJson& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::vector<std::vector<std::int64_t>> coeffs(const std::vector<RootVec>& vs) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& v : vs) out.push_back(v.coeffs());
  return out;
}

MoveKind move_kind(const std::string& s) {
  if (s == "commute" || s == "2") return MoveKind::Commute;
  if (s == "braid" || s == "3") return MoveKind::Braid;
  throw InvalidInput("move kind must be 'commute' or 'braid'");
}

MRoute route(const std::string& s) {
  if (s == "cokernel") return MRoute::Cokernel;
  if (s == "reflection") return MRoute::Reflection;
  throw InvalidInput("route must be 'cokernel' or 'reflection'");
}

template <class K>
void bind_field(py::module_& m, const char* module_name, const char* engine_name) {
  using E = Engine<K>;
  using M = PModule<K>;
  py::class_<M>(m, module_name)
      .def_property_readonly("dims", [](const M& x) { return x.dims().coeffs(); })
      .def_property_readonly("total_dim", &M::total_dim)
      .def_property_readonly("graph", &M::graph)
      .def("__repr__", [module_name](const M& x) { return std::string(module_name) + "(dims=" + to_string(x.dims()) + ")"; });

  py::class_<E>(m, engine_name)
      .def(py::init([](std::uint64_t p, bool flipped) {
             if constexpr (std::is_same_v<K, PrimeField>) {
               return E(PrimeField(p), EngineOptions{flipped ? SignConvention::Flipped : SignConvention::Standard});
             } else {
               (void)p;
               return E(K{}, EngineOptions{flipped ? SignConvention::Flipped : SignConvention::Standard});
             }
           }),
           py::arg("prime") = PrimeField::kDefaultPrime, py::arg("flipped_sign") = false)
      .def_property_readonly("field", [](const E& e) { return e.field().name(); })
      .def("zero_module", &E::zero_module)
      .def("simple", &E::simple)
      .def("sigma", &E::sigma)
      .def("sigma_star", &E::sigma_star)
      .def("sigma_word", &E::sigma_word)
      .def("soc_dim", &E::soc_dim)
      .def("top_dim", &E::top_dim)
      .def("socle_dims", [](const E& e, const M& x) { return e.socle_dims(x).coeffs(); })
      .def("top_dims", [](const E& e, const M& x) { return e.top_dims(x).coeffs(); })
      .def("satisfies_relations", &E::satisfies_relations)
      .def("is_nilpotent", &E::is_nilpotent)
      .def("direct_sum", &E::direct_sum)
      .def("n_module",
           [](const E& e, const CartanGraph& g, const WeylWord& w, const std::vector<std::int64_t>& lam) {
             return e.n_module(g, w, Weight(lam));
           })
      .def("v_module", &E::v_module)
      .def("m_module",
           [](const E& e, const CartanGraph& g, const WeylWord& w, std::size_t k, const std::string& r, std::uint64_t seed) {
             Rng rng(seed);
             return e.m_module(g, w, k, route(r), rng);
           },
           py::arg("graph"), py::arg("word"), py::arg("k"), py::arg("route") = "reflection", py::arg("seed") = 0)
      .def("m_modules", &E::m_modules)
      .def("projective_cover", &E::projective_cover)
      .def("injective_hull", &E::injective_hull)
      .def("random_module",
           [](const E& e, const CartanGraph& g, std::size_t dim, std::uint64_t seed) {
             Rng rng(seed);
             return random_module(e, g, dim, rng);
           },
           py::arg("graph"), py::arg("dim"), py::arg("seed") = 0)
      .def("build_filtered",
           [](const E& e, const CartanGraph& g, const WeylWord& w, const std::vector<int>& a, std::uint64_t seed) {
             Rng rng(seed);
             return e.build_filtered(g, w, a, rng);
           },
           py::arg("graph"), py::arg("word"), py::arg("a"), py::arg("seed") = 0)
      .def("extract_datum",
           [](const E& e, const CartanGraph& g, const WeylWord& w, const M& x) {
             const auto r = e.extract_datum(g, w, x);
             py::dict d;
             d["ok"] = r.ok;
             d["datum"] = r.datum;
             d["residual"] = r.residual.coeffs();
             return d;
           })
      .def("is_iso",
           [](const E& e, const M& a, const M& b, std::uint64_t seed) {
             Rng rng(seed);
             return e.is_iso(a, b, rng).isomorphic;
           },
           py::arg("a"), py::arg("b"), py::arg("seed") = 0)
      .def("to_json", [](const E& e, const M& x) { return module_to_json(x, e.field()).dump(); })
      .def("from_json", [](const E& e, const std::string& s) { return module_from_json(Json::parse(s), e); });
}

}  // namespace

PYBIND11_MODULE(nilcrystal, m) {
  m.doc() = "Nilpotent preprojective modules, Lusztig data and their verification suites";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<NonReducedWord>(m, "NonReducedWord", invalid.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", invalid.ptr());
  py::register_exception<GraphMismatch>(m, "GraphMismatch", invalid.ptr());
  py::register_exception<PreconditionViolated>(m, "PreconditionViolated", invalid.ptr());
  py::register_exception<InvalidMovePosition>(m, "InvalidMovePosition", invalid.ptr());
  py::register_exception<DifferentWeylElement>(m, "DifferentWeylElement", invalid.ptr());
  py::register_exception<InvalidModule>(m, "InvalidModule", base.ptr());
  py::register_exception<InternalRelationFailure>(m, "InternalRelationFailure", base.ptr());
  py::register_exception<NoEmbeddingFound>(m, "NoEmbeddingFound", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<UnknownSuite>(m, "UnknownSuite", base.ptr());

  py::class_<WeylWord>(m, "WeylWord")
      .def(py::init<std::vector<Vertex>>())
      .def_property_readonly("letters", &WeylWord::letters)
      .def("__len__", &WeylWord::size)
      .def("__eq__", [](const WeylWord& a, const WeylWord& b) { return a == b; })
      .def("__repr__", [](const WeylWord& w) { return "WeylWord(" + to_string(w) + ")"; });
  py::implicitly_convertible<std::vector<Vertex>, WeylWord>();
  py::implicitly_convertible<py::list, WeylWord>();
  py::implicitly_convertible<py::tuple, WeylWord>();

  py::class_<CartanGraph>(m, "CartanGraph")
      .def(py::init<std::size_t, const std::vector<std::pair<Vertex, Vertex>>&>(), py::arg("n"), py::arg("edges"))
      .def_static("type_a", &CartanGraph::type_a)
      .def_static("type_d", &CartanGraph::type_d)
      .def_static("affine_a1", &CartanGraph::affine_a1)
      .def_static("from_json", [](const std::string& s) { return graph_from_json(Json::parse(s)); })
      .def("to_json", [](const CartanGraph& g) { return graph_to_json(g).dump(); })
      .def_property_readonly("vertex_count", &CartanGraph::vertex_count)
      .def_property_readonly("edges",
                             [](const CartanGraph& g) {
                               std::vector<std::pair<Vertex, Vertex>> out;
                               for (const auto& e : g.edges()) out.emplace_back(e.tail, e.head);
                               return out;
                             })
      .def("cartan", &CartanGraph::cartan)
      .def("is_finite_type", &CartanGraph::is_finite_type)
      .def("__eq__", [](const CartanGraph& a, const CartanGraph& b) { return a == b; });

  m.def("beta_sequence", [](const CartanGraph& g, const WeylWord& w) { return coeffs(beta_sequence(g, w)); });
  m.def("is_reduced", &is_reduced);
  m.def("reduced_words", &reduced_words, py::arg("graph"), py::arg("word"), py::arg("cap") = 100000);
  m.def("all_reduced_words", &all_reduced_words);
  m.def("greedy_reduced_word", &greedy_reduced_word);
  m.def("same_element", &same_element);
  m.def("apply_word", [](const CartanGraph& g, const WeylWord& w, const std::vector<std::int64_t>& lam) {
    return apply_word(g, w, Weight(lam)).coeffs();
  });
  m.def("mu", [](const CartanGraph& g, const WeylWord& w, const std::vector<int>& a) { return mu(g, w, a).coeffs(); });

  py::class_<LusztigDatum>(m, "LusztigDatum")
      .def(py::init<CartanGraph, WeylWord, std::vector<int>>(), py::arg("graph"), py::arg("word"), py::arg("a"))
      .def_property_readonly("word", &LusztigDatum::word)
      .def_property_readonly("a", &LusztigDatum::a)
      .def_property_readonly("graph", &LusztigDatum::graph)
      .def("__eq__", [](const LusztigDatum& x, const LusztigDatum& y) { return x == y; })
      .def("__repr__", [](const LusztigDatum& d) { return "LusztigDatum(" + datum_to_json(d).dump() + ")"; });

  m.def("eps_star", &eps_star);
  m.def("e_star_max", &e_star_max);
  m.def("saito_T", &saito_T);
  m.def("saito_T_inv", &saito_T_inv);
  m.def("weight", [](const LusztigDatum& d) { return weight(d).coeffs(); });
  m.def("apply_move", [](const LusztigDatum& d, const std::string& kind, std::size_t pos) { return apply_move(d, move_kind(kind), pos); });
  m.def("equal", &equal, py::arg("x"), py::arg("y"), py::arg("cap") = 200000);
  m.def("canonical_form", &canonical_form, py::arg("d"), py::arg("cap") = 200000);
  m.def("extraction_chain", [](const LusztigDatum& d) {
    const auto cert = extraction_chain(d);
    py::list steps;
    for (const auto& s : cert.steps)
      steps.append(py::make_tuple(s.kind == ExtractionStep::Kind::EStarMax ? "e*max" : "T", s.letter, s.exponent));
    return py::make_tuple(cert.exponents(), steps);
  });

  bind_field<PrimeField>(m, "PrimeModule", "PrimeEngine");
  bind_field<RationalField>(m, "RationalModule", "RationalEngine");

  m.def(
      "run_suite",
      [](const std::string& suite, const CartanGraph& g, const std::string& field, std::uint64_t seed,
         std::optional<WeylWord> word, std::optional<int> bound, std::optional<std::size_t> samples,
         std::optional<std::size_t> corpus, std::optional<std::size_t> max_len, unsigned threads) {
        SuiteConfig cfg;
        cfg.suite = suite;
        cfg.graph = g;
        cfg.field = FieldSpec::parse(field);
        cfg.seed = seed;
        cfg.word = std::move(word);
        cfg.bound = bound;
        cfg.samples = samples;
        cfg.corpus = corpus;
        cfg.max_len = max_len;
        cfg.threads = threads;
        std::vector<CheckReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_suite(cfg);
        }
        py::list out;
        for (const auto& r : reports) out.append(from_json(r.to_json(false)));
        return out;
      },
      py::arg("suite"), py::arg("graph"), py::arg("field") = "prime:" + std::to_string(PrimeField::kDefaultPrime),
      py::arg("seed") = 0, py::arg("word") = py::none(), py::arg("bound") = py::none(), py::arg("samples") = py::none(),
      py::arg("corpus") = py::none(), py::arg("max_len") = py::none(), py::arg("threads") = 1);
}
