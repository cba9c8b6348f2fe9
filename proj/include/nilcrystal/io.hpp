#pragma once

// JSON formats for graphs, modules and Lusztig data. Vertices and word
// letters are 1-based in every file; words are listed in application order.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nilcrystal/crystal.hpp"
#include "nilcrystal/field.hpp"
#include "nilcrystal/prepmod.hpp"
#include "nilcrystal/rootsys.hpp"

namespace nilcrystal {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline constexpr const char* kWordConvention = "application-order; the leftmost-first display (i_r,...,i_1) is the reverse";

/// "rat" or "prime:P".
struct FieldSpec {
  bool rational = false;
  std::uint64_t prime = PrimeField::kDefaultPrime;

  /// Throws InvalidInput on a malformed spec, a composite, or P >= 2^63.
  static FieldSpec parse(const std::string& text);
  std::string name() const;
};

/// {"vertices": n, "edges": [[i,j],...], "orientation": [[i,j],...]}.
/// Orientation entries, when present, must list every edge with its
/// direction; without them each edge points from the smaller label.
CartanGraph graph_from_json(const Json& j);
OrderedJson graph_to_json(const CartanGraph& g);
CartanGraph load_graph(const std::string& path);

/// Parses a word given with 1-based letters.
WeylWord word_from_labels(const std::vector<long long>& labels, const CartanGraph& g);
OrderedJson word_to_json(const WeylWord& w);

template <class K>
OrderedJson module_to_json(const PModule<K>& m, const K& field);

/// Reads a module dump written over the same kind of field. Shape and
/// element errors throw FormatError; relation and nilpotency violations
/// throw InvalidModule.
template <class K>
PModule<K> module_from_json(const Json& j, const Engine<K>& engine);

/// "prime:P" or "rat", read from a module dump.
std::string module_field_name(const Json& j);

OrderedJson datum_to_json(const LusztigDatum& d);
LusztigDatum datum_from_json(const Json& j, const CartanGraph& g);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nilcrystal
