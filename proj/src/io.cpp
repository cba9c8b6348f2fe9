#include "nilcrystal/io.hpp"

#include <fstream>
#include <sstream>

#include "nilcrystal/errors.hpp"

namespace nilcrystal {

FieldSpec FieldSpec::parse(const std::string& text) {
  FieldSpec s;
  if (text == "rat" || text == "rational") {
    s.rational = true;
    return s;
  }
  const std::string prefix = "prime:";
  if (text.rfind(prefix, 0) != 0) throw InvalidInput("field must be 'rat' or 'prime:P', got '" + text + "'");
  const auto digits = text.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw InvalidInput("bad prime in field spec '" + text + "'");
  try {
    s.prime = std::stoull(digits);
  } catch (const std::exception&) {
    throw InvalidInput("prime out of range in field spec '" + text + "'");
  }
  PrimeField check(s.prime);  // validates primality and range
  (void)check;
  return s;
}

std::string FieldSpec::name() const { return rational ? "rat" : "prime:" + std::to_string(prime); }

namespace {

Vertex label_to_vertex(const Json& x, std::size_t n) {
  if (!x.is_number_integer()) throw FormatError("vertex labels must be integers");
  const auto v = x.get<long long>();
  if (v < 1 || static_cast<std::size_t>(v) > n) throw FormatError("vertex label " + std::to_string(v) + " out of range 1.." + std::to_string(n));
  return static_cast<Vertex>(v - 1);
}

}  // namespace

CartanGraph graph_from_json(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) throw FormatError("graph needs 'vertices' and 'edges'");
    const auto n = j.at("vertices").get<long long>();
    if (n < 0) throw FormatError("negative vertex count");
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw FormatError("each edge is a pair [i, j]");
      pairs.emplace_back(label_to_vertex(e[0], n), label_to_vertex(e[1], n));
    }
    if (!j.contains("orientation") || j.at("orientation").is_null()) return CartanGraph(static_cast<std::size_t>(n), pairs);
    std::vector<OrientedEdge> oriented;
    const auto& o = j.at("orientation");
    if (!o.is_array() || o.size() != pairs.size()) throw FormatError("orientation must list every edge once");
    std::vector<bool> used(pairs.size(), false);
    for (const auto& e : o) {
      if (!e.is_array() || e.size() != 2) throw FormatError("each orientation entry is a pair [tail, head]");
      const Vertex t = label_to_vertex(e[0], n), h = label_to_vertex(e[1], n);
      bool matched = false;
      for (std::size_t k = 0; k < pairs.size() && !matched; ++k) {
        const auto [a, b] = pairs[k];
        if (!used[k] && ((a == t && b == h) || (a == h && b == t))) {
          used[k] = true;
          matched = true;
        }
      }
      if (!matched) throw FormatError("orientation entry does not match an edge");
      oriented.push_back({t, h});
    }
    return CartanGraph(static_cast<std::size_t>(n), std::move(oriented));
  } catch (const Json::exception& e) {
    throw FormatError(std::string("graph: ") + e.what());
  } catch (const InvalidInput& e) {
    throw FormatError(std::string("graph: ") + e.what());
  }
}

OrderedJson graph_to_json(const CartanGraph& g) {
  OrderedJson j;
  j["vertices"] = g.vertex_count();
  j["edges"] = OrderedJson::array();
  j["orientation"] = OrderedJson::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back({std::min(e.tail, e.head) + 1, std::max(e.tail, e.head) + 1});
    j["orientation"].push_back({e.tail + 1, e.head + 1});
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed for " + path);
}

CartanGraph load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

WeylWord word_from_labels(const std::vector<long long>& labels, const CartanGraph& g) {
  std::vector<Vertex> letters;
  for (auto l : labels) {
    if (l < 1 || static_cast<std::size_t>(l) > g.vertex_count())
      throw InvalidInput("word letter " + std::to_string(l) + " out of range 1.." + std::to_string(g.vertex_count()));
    letters.push_back(static_cast<Vertex>(l - 1));
  }
  return WeylWord(std::move(letters));
}

OrderedJson word_to_json(const WeylWord& w) {
  OrderedJson j = OrderedJson::array();
  for (auto v : w.letters()) j.push_back(v + 1);
  return j;
}

std::string module_field_name(const Json& j) {
  if (!j.contains("field") || !j.at("field").is_string()) throw FormatError("module dump has no 'field'");
  return j.at("field").get<std::string>();
}

template <class K>
OrderedJson module_to_json(const PModule<K>& m, const K& field) {
  OrderedJson j;
  j["field"] = field.name();
  if constexpr (std::is_same_v<K, PrimeField>) j["prime"] = std::to_string(field.modulus());
  j["graph"] = graph_to_json(m.graph());
  j["dims"] = m.dims().coeffs();
  j["arrows"] = OrderedJson::array();
  const auto& arrows = m.graph().arrows();
  for (std::size_t a = 0; a < arrows.size(); ++a) {
    OrderedJson arr;
    arr["source"] = arrows[a].source + 1;
    arr["target"] = arrows[a].target + 1;
    arr["sign"] = arrows[a].sign;
    arr["rows"] = m.map(a).rows();
    arr["cols"] = m.map(a).cols();
    OrderedJson rows = OrderedJson::array();
    for (std::size_t r = 0; r < m.map(a).rows(); ++r) {
      OrderedJson row = OrderedJson::array();
      for (std::size_t c = 0; c < m.map(a).cols(); ++c) row.push_back(field.to_string(m.map(a)(r, c)));
      rows.push_back(std::move(row));
    }
    arr["matrix"] = std::move(rows);
    j["arrows"].push_back(std::move(arr));
  }
  return j;
}

template <class K>
PModule<K> module_from_json(const Json& j, const Engine<K>& engine) {
  const auto& field = engine.field();
  CartanGraph g;
  RootVec dims;
  std::vector<la::Mat<K>> maps;
  try {
    const auto name = module_field_name(j);
    if (name != field.name()) throw FormatError("module is over " + name + ", expected " + field.name());
    g = graph_from_json(j.at("graph"));
    std::vector<std::int64_t> d;
    for (const auto& x : j.at("dims")) d.push_back(x.get<std::int64_t>());
    dims = RootVec(std::move(d));
    if (dims.size() != g.vertex_count()) throw FormatError("dims length does not match the graph");
    if (!dims.is_nonnegative()) throw FormatError("negative dimension");
    const auto& arrows = j.at("arrows");
    if (!arrows.is_array() || arrows.size() != g.arrows().size()) throw FormatError("wrong number of arrows");
    for (std::size_t a = 0; a < arrows.size(); ++a) {
      const auto& arr = arrows[a];
      const auto& expect = g.arrows()[a];
      if (arr.at("source").get<std::size_t>() != expect.source + 1 || arr.at("target").get<std::size_t>() != expect.target + 1)
        throw FormatError("arrow " + std::to_string(a + 1) + " does not match the graph's arrow order");
      const auto rows = static_cast<std::size_t>(dims[expect.target]);
      const auto cols = static_cast<std::size_t>(dims[expect.source]);
      const auto& mat = arr.at("matrix");
      if (!mat.is_array() || mat.size() != rows) throw FormatError("arrow " + std::to_string(a + 1) + " has the wrong number of rows");
      la::Mat<K> m(rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        if (!mat[r].is_array() || mat[r].size() != cols) throw FormatError("arrow " + std::to_string(a + 1) + " has a ragged row");
        for (std::size_t c = 0; c < cols; ++c) {
          const auto& x = mat[r][c];
          m(r, c) = field.parse(x.is_string() ? x.get<std::string>() : x.dump());
        }
      }
      maps.push_back(std::move(m));
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("module: ") + e.what());
  }
  return engine.make_module(std::move(g), std::move(dims), std::move(maps));
}

OrderedJson datum_to_json(const LusztigDatum& d) {
  OrderedJson j;
  j["convention"] = kWordConvention;
  j["word"] = word_to_json(d.word());
  j["a"] = d.a();
  return j;
}

LusztigDatum datum_from_json(const Json& j, const CartanGraph& g) {
  try {
    const auto w = word_from_labels(j.at("word").get<std::vector<long long>>(), g);
    return LusztigDatum(g, w, j.at("a").get<std::vector<int>>());
  } catch (const Json::exception& e) {
    throw FormatError(std::string("datum: ") + e.what());
  }
}

template OrderedJson module_to_json(const PModule<PrimeField>&, const PrimeField&);
template OrderedJson module_to_json(const PModule<RationalField>&, const RationalField&);
template PModule<PrimeField> module_from_json(const Json&, const Engine<PrimeField>&);
template PModule<RationalField> module_from_json(const Json&, const Engine<RationalField>&);

}  // namespace nilcrystal
