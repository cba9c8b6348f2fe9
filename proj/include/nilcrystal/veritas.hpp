#pragma once

// Verification harness: each check evaluates one family of statements over
// a finite range of inputs and returns a CheckReport. Checks never throw on
// a mathematical failure; that is recorded in the report.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nilcrystal/errors.hpp"
#include "nilcrystal/io.hpp"
#include "nilcrystal/prepmod.hpp"

namespace nilcrystal {

enum class Outcome { Pass, ProbabilisticPass, VacuousPass, Fail };
std::string to_string(Outcome o);

struct CheckReport {
  std::string id;
  std::string statement;
  OrderedJson parameters = OrderedJson::object();
  Outcome outcome = Outcome::Pass;
  /// Bound used by probabilistic steps; empty when everything was exact.
  std::string confidence;
  std::size_t instances = 0;
  std::size_t failures = 0;
  OrderedJson stats = OrderedJson::object();
  std::vector<std::string> notes;
  /// Replay data plus the first counterexample; null unless failing.
  OrderedJson witness;
  double seconds = 0.0;

  bool passed() const { return outcome != Outcome::Fail; }
  OrderedJson to_json(bool with_time = true) const;
};

/// Random module built as iterated random extensions of random simples,
/// total dimension exactly `target_dim`.
template <class K>
PModule<K> random_module(const Engine<K>& e, const CartanGraph& g, std::size_t target_dim, Rng& rng);

/// beta sequences against a matrix reflection oracle and reducedness against
/// exhaustive length computation, for every word of length <= max_len.
CheckReport check_roots(const CartanGraph& g, std::size_t max_len, std::uint64_t seed);

/// The four reflection-functor contracts (exactness, the natural sequences
/// for unit and counit, braid relations, dimension law) plus additivity on
/// short exact sequences with trivial i-top, over `corpus` random modules.
template <class K>
CheckReport check_reflection(const Engine<K>& e, const CartanGraph& g, std::size_t corpus, std::uint64_t seed,
                          std::size_t max_dim = 12);

/// Runs check_reflection with the flipped sign convention and passes iff that
/// run fails. Vacuous where no vertex has two distinct neighbours.
template <class K>
CheckReport check_sign_mutation(const K& field, const CartanGraph& g, std::size_t corpus, std::uint64_t seed,
                                std::size_t max_dim = 12);

/// N, V and M modules for every reduced word of length <= max_len.
template <class K>
CheckReport check_modules(const Engine<K>& e, const CartanGraph& g, std::size_t max_len, std::uint64_t seed);

/// Stratum samples over the grid {0..bound}^r against the crystal side.
template <class K>
CheckReport check_parametrization(const Engine<K>& e, const CartanGraph& g, const WeylWord& w, int bound, std::size_t samples,
                            std::uint64_t seed);

/// Braid transitions against the module oracle, over every reduced word of
/// the element named by w.
template <class K>
CheckReport check_transitions(const Engine<K>& e, const CartanGraph& g, const WeylWord& w, int bound, std::size_t samples,
                              std::uint64_t seed);

/// Startup check of the 3-move formula.
CheckReport check_transition_formula();

struct Job {
  std::string id;
  std::function<CheckReport(std::uint64_t seed)> run;
};

/// Runs jobs on up to `threads` workers; job k receives mix_seed(master, k).
/// Reports come back in job order. Math errors become Fail reports; any
/// other exception is rethrown after all jobs finish.
std::vector<CheckReport> run_jobs(const std::vector<Job>& jobs, std::uint64_t master_seed, unsigned threads);

class UnknownSuite : public Error {
 public:
  using Error::Error;
};

struct SuiteConfig {
  std::string suite = "all";
  CartanGraph graph;
  std::string graph_name;
  FieldSpec field;
  std::uint64_t seed = 0;
  std::optional<WeylWord> word;
  std::optional<int> bound;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> corpus;
  std::optional<std::size_t> max_len;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Suite names: roots, reflection (alias lemma32), mutation, modules,
/// parametrization (alias thm51), transitions, all.
std::vector<std::string> suite_names();
std::vector<CheckReport> run_suite(const SuiteConfig& cfg);

OrderedJson reports_to_json(const std::vector<CheckReport>& reports, const OrderedJson& header, bool with_time);
std::string reports_to_csv(const std::vector<CheckReport>& reports, bool with_time);

}  // namespace nilcrystal
