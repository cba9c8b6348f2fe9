#include <gtest/gtest.h>

#include "nilcrystal/errors.hpp"
#include "nilcrystal/io.hpp"

using namespace nilcrystal;

TEST(FieldSpec, Parse) {
  EXPECT_TRUE(FieldSpec::parse("rat").rational);
  const auto p = FieldSpec::parse("prime:2147483659");
  EXPECT_FALSE(p.rational);
  EXPECT_EQ(p.prime, 2147483659u);
  EXPECT_EQ(p.name(), "prime:2147483659");
  EXPECT_THROW(FieldSpec::parse("prime:15"), InvalidInput);
  EXPECT_THROW(FieldSpec::parse("prime:"), InvalidInput);
  EXPECT_THROW(FieldSpec::parse("real"), InvalidInput);
}

TEST(Graph, RoundTrip) {
  const auto g = CartanGraph::type_d(4);
  EXPECT_EQ(graph_from_json(Json::parse(graph_to_json(g).dump())), g);
  const auto a = graph_from_json(Json::parse(R"({"vertices":2,"edges":[[1,2],[1,2]]})"));
  EXPECT_EQ(a, CartanGraph::affine_a1());
}

TEST(Graph, Orientation) {
  const auto g = graph_from_json(Json::parse(R"({"vertices":2,"edges":[[1,2]],"orientation":[[2,1]]})"));
  EXPECT_EQ(g.edges()[0].tail, 1u);
  EXPECT_EQ(g.edges()[0].head, 0u);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":2,"edges":[[1,2]],"orientation":[[1,3]]})")), FormatError);
}

TEST(Graph, Malformed) {
  EXPECT_THROW(graph_from_json(Json::parse(R"({"edges":[[1,2]]})")), FormatError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":2,"edges":[[1,1]]})")), FormatError);
  EXPECT_THROW(graph_from_json(Json::parse(R"({"vertices":2,"edges":[[1,5]]})")), FormatError);
  EXPECT_THROW(graph_from_json(Json::parse(R"([1,2])")), FormatError);
}

TEST(Word, Labels) {
  const auto g = CartanGraph::type_a(3);
  EXPECT_EQ(word_from_labels({1, 2, 3}, g), (WeylWord{0, 1, 2}));
  EXPECT_THROW(word_from_labels({0}, g), InvalidInput);
  EXPECT_THROW(word_from_labels({4}, g), InvalidInput);
  EXPECT_EQ(word_to_json(WeylWord{0, 2}).dump(), "[1,3]");
}

TEST(Module, RoundTripBothFields) {
  const auto g = CartanGraph::type_a(3);
  Rng rng(3);
  {
    const Engine<RationalField> e;
    const auto m = e.m_module(g, {1, 0, 2, 1}, 4, MRoute::Reflection, rng);
    const auto j = module_to_json(m, e.field());
    EXPECT_EQ(module_field_name(Json::parse(j.dump())), "rat");
    const auto back = module_from_json(Json::parse(j.dump()), e);
    EXPECT_EQ(back.dims(), m.dims());
    for (std::size_t a = 0; a < m.maps().size(); ++a) EXPECT_TRUE(la::equal(e.field(), back.map(a), m.map(a)));
  }
  {
    const Engine<PrimeField> e(PrimeField(2147483659u));
    const auto m = e.v_module(g, {1, 0, 2, 1}, 4);
    const auto back = module_from_json(Json::parse(module_to_json(m, e.field()).dump()), e);
    EXPECT_EQ(back.dims(), m.dims());
    EXPECT_THROW(module_from_json(Json::parse(module_to_json(m, e.field()).dump()), Engine<RationalField>()), FormatError);
  }
}

TEST(Module, RejectsBrokenRelations) {
  // S1 and S2 glued by both arrows with nonzero product breaks the relation at 1.
  const auto j = Json::parse(R"({"field":"rat","graph":{"vertices":2,"edges":[[1,2]]},"dims":[1,1],
    "arrows":[{"source":1,"target":2,"sign":1,"rows":1,"cols":1,"matrix":[["1"]]},
              {"source":2,"target":1,"sign":-1,"rows":1,"cols":1,"matrix":[["1"]]}]})");
  EXPECT_THROW(module_from_json(j, Engine<RationalField>()), InvalidModule);
}

TEST(Module, RejectsMalformed) {
  const auto j = Json::parse(R"({"field":"rat","graph":{"vertices":2,"edges":[[1,2]]},"dims":[1,1],
    "arrows":[{"source":1,"target":2,"sign":1,"rows":2,"cols":1,"matrix":[["1"],["0"]]}]})");
  EXPECT_THROW(module_from_json(j, Engine<RationalField>()), FormatError);
}

TEST(Datum, RoundTrip) {
  const auto g = CartanGraph::type_a(2);
  const auto d = datum(g, {0, 1, 0}, {2, 0, 1});
  const auto back = datum_from_json(Json::parse(datum_to_json(d).dump()), g);
  EXPECT_EQ(back, d);
}
