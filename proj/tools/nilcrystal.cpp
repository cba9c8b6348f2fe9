// nilcrystal: compute root sequences and module families, read Lusztig data
// off module dumps, and run the verification suites.
//
// Exit codes: 0 pass, 1 mathematical failure, 2 bad mathematical input,
// 3 invalid module file, 4 infrastructure.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nilcrystal/crystal.hpp"
#include "nilcrystal/errors.hpp"
#include "nilcrystal/io.hpp"
#include "nilcrystal/veritas.hpp"

using namespace nilcrystal;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kPass = 0, kMathFailure = 1, kBadInput = 2, kBadModule = 3, kInfrastructure = 4 };

// Infrastructure problems: missing files, unwritable outputs.
struct IoFailure : Error {
  using Error::Error;
};

struct Common {
  std::string graph_path;
  std::string field = "prime:" + std::to_string(PrimeField::kDefaultPrime);
  std::uint64_t seed = 0;
  bool json = false;
  std::string out;
  bool paper_order = false;
  bool no_timestamp = false;
  std::vector<long long> word;
};

void add_common(CLI::App* cmd, Common& c, bool needs_graph = true) {
  auto* g = cmd->add_option("--graph", c.graph_path, "graph file (JSON)");
  if (needs_graph) g->required();
  cmd->add_option("--field", c.field, "rat or prime:P with P > 2^31")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd->add_flag("--json", c.json, "machine-readable output");
  cmd->add_option("--out", c.out, "output path");
  cmd->add_flag("--paper-order", c.paper_order, "word is given leftmost factor first, i.e. (i_r, ..., i_1)");
  cmd->add_flag("--no-timestamp", c.no_timestamp, "omit timestamps and timings for byte-identical output");
}

FieldSpec field_of(const Common& c) {
  auto f = FieldSpec::parse(c.field);
  if (!f.rational && f.prime <= (std::uint64_t{1} << 31)) throw InvalidInput("prime must exceed 2^31, got " + std::to_string(f.prime));
  return f;
}

CartanGraph graph_of(const Common& c) {
  if (!std::filesystem::exists(c.graph_path)) throw IoFailure("cannot open " + c.graph_path);
  try {
    return load_graph(c.graph_path);
  } catch (const FormatError& e) {
    throw InvalidInput(e.what());
  }
}

WeylWord word_of(const Common& c, const CartanGraph& g) {
  auto labels = c.word;
  if (c.paper_order) std::reverse(labels.begin(), labels.end());
  return word_from_labels(labels, g);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

OrderedJson config_json(const std::string& command, const Common& c, const CartanGraph& g) {
  OrderedJson j;
  j["command"] = command;
  j["graph_path"] = c.graph_path;
  j["graph"] = graph_to_json(g);
  j["field"] = c.field;
  j["seed"] = c.seed;
  j["word_convention"] = "application order: the first letter is applied first";
  return j;
}

OrderedJson header(const std::string& command, const Common& c, const CartanGraph& g) {
  OrderedJson h;
  h["tool"] = "nilcrystal";
  h["version"] = kVersion;
  h["config"] = config_json(command, c, g);
  if (!c.no_timestamp) h["timestamp"] = timestamp();
  return h;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  try {
    write_text_file(c.out, text);
  } catch (const FormatError& e) {
    throw IoFailure(e.what());
  }
}

std::string labels(const WeylWord& w) {
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) s += (k ? " " : "") + std::to_string(w[k] + 1);
  return s;
}

// ---- roots -----------------------------------------------------------------

int cmd_roots(const Common& c) {
  const auto g = graph_of(c);
  const auto w = word_of(c, g);
  const auto betas = beta_sequence(g, w);
  if (c.json) {
    auto j = header("roots", c, g);
    j["word"] = word_to_json(w);
    j["rows"] = OrderedJson::array();
    for (std::size_t k = 0; k < w.size(); ++k)
      j["rows"].push_back({{"k", k + 1}, {"letter", w[k] + 1}, {"beta", betas[k].coeffs()}});
    emit(c, j.dump(2) + "\n");
    return kPass;
  }
  std::ostringstream s;
  s << "word (application order): " << labels(w) << "\n";
  s << std::left << std::setw(4) << "k" << std::setw(6) << "i_k" << "beta\n";
  for (std::size_t k = 0; k < w.size(); ++k) s << std::setw(4) << k + 1 << std::setw(6) << w[k] + 1 << to_string(betas[k]) << "\n";
  emit(c, s.str());
  return kPass;
}

// ---- modules ---------------------------------------------------------------

template <class K>
int modules_over(const K& field, const Common& c, const std::string& which) {
  const auto g = graph_of(c);
  const auto w = word_of(c, g);
  if (!is_reduced(g, w)) throw NonReducedWord("word " + to_string(w) + " is not reduced");
  const Engine<K> e(field);
  Rng rng(c.seed);
  struct Row {
    std::string label;
    PModule<K> module;
  };
  std::vector<Row> rows;
  if (which == "M") {
    const auto ms = e.m_modules(g, w);
    for (std::size_t k = 0; k < ms.size(); ++k) rows.push_back({"k=" + std::to_string(k + 1), ms[k]});
  } else if (which == "V") {
    for (std::size_t k = 1; k <= w.size(); ++k) rows.push_back({"k=" + std::to_string(k), e.v_module(g, w, k)});
  } else {
    for (Vertex j = 0; j < g.vertex_count(); ++j)
      rows.push_back({"lambda=w" + std::to_string(j + 1), e.n_module(g, w, fundamental_weight(g, j))});
  }

  auto j = header("modules", c, g);
  j["config"]["family"] = which;
  j["word"] = word_to_json(w);
  j["modules"] = OrderedJson::array();
  for (const auto& r : rows) j["modules"].push_back({{"label", r.label}, {"dims", r.module.dims().coeffs()}, {"module", module_to_json(r.module, field)}});

  if (c.json || !c.out.empty()) emit(c, j.dump(2) + "\n");
  if (!c.json) {
    std::ostringstream s;
    s << which << " modules for word " << labels(w) << "\n";
    for (const auto& r : rows) s << "  " << std::left << std::setw(12) << r.label << to_string(r.module.dims()) << "\n";
    std::cout << s.str();
  }
  return kPass;
}

int cmd_modules(const Common& c, const std::string& which) {
  const auto f = field_of(c);
  return f.rational ? modules_over(RationalField(), c, which) : modules_over(PrimeField(f.prime), c, which);
}

// ---- extract ---------------------------------------------------------------

template <class K>
int extract_over(const K& field, const Common& c, const Json& file) {
  const Engine<K> e(field);
  PModule<K> m;
  try {
    m = module_from_json(file, e);
  } catch (const FormatError& ex) {
    throw InvalidModule(ex.what());
  }
  const auto& g = m.graph();
  if (!c.graph_path.empty() && !(graph_of(c) == g)) throw GraphMismatch("module graph differs from --graph");
  const auto w = word_of(c, g);
  if (!is_reduced(g, w)) throw NonReducedWord("word " + to_string(w) + " is not reduced");
  const auto r = e.extract_datum(g, w, m);

  if (c.json) {
    auto j = header("extract", c, g);
    j["config"]["field"] = field.name();
    j["word"] = word_to_json(w);
    j["ok"] = r.ok;
    j["datum"] = r.datum;
    j["residual"] = r.residual.coeffs();
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    if (r.ok) {
      s << "a = (";
      for (std::size_t k = 0; k < r.datum.size(); ++k) s << (k ? "," : "") << r.datum[k];
      s << ")\n";
    } else {
      s << "NotInGenericStratum: residual dimension vector " << to_string(r.residual) << "\n";
    }
    emit(c, s.str());
  }
  return r.ok ? kPass : kMathFailure;
}

int cmd_extract(const Common& c, const std::string& path) {
  if (!std::filesystem::exists(path)) throw IoFailure("cannot open " + path);
  Json file;
  try {
    file = read_json_file(path);
  } catch (const FormatError& e) {
    throw InvalidModule(e.what());
  }
  std::string name;
  try {
    name = module_field_name(file);
  } catch (const FormatError& e) {
    throw InvalidModule(e.what());
  }
  FieldSpec f;
  try {
    f = FieldSpec::parse(name);
  } catch (const InvalidInput& e) {
    throw InvalidModule(e.what());
  }
  return f.rational ? extract_over(RationalField(), c, file) : extract_over(PrimeField(f.prime), c, file);
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::optional<int> bound;
  std::optional<std::size_t> samples, corpus, max_len;
  unsigned threads = 1;
};

int cmd_verify(const Common& c, const std::string& suite, const VerifyArgs& v) {
  const auto g = graph_of(c);
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.graph = g;
  cfg.graph_name = c.graph_path;
  cfg.field = field_of(c);
  cfg.seed = c.seed;
  if (!c.word.empty()) cfg.word = word_of(c, g);
  cfg.bound = v.bound;
  cfg.samples = v.samples;
  cfg.corpus = v.corpus;
  cfg.max_len = v.max_len;
  cfg.threads = v.threads;
  const auto reports = run_suite(cfg);

  auto h = header("verify", c, g);
  auto& conf = h["config"];
  conf["suite"] = suite;
  if (cfg.word) conf["word"] = word_to_json(*cfg.word);
  if (v.bound) conf["bound"] = *v.bound;
  if (v.samples) conf["samples"] = *v.samples;
  if (v.corpus) conf["corpus"] = *v.corpus;
  if (v.max_len) conf["max_len"] = *v.max_len;
  conf["threads"] = v.threads;
  h["note"] =
      "the parametrization checks verify operational consequences (weights, socle reads, extraction chains); the "
      "crystal isomorphism itself is not a computable object here and is not checked directly";
  const bool with_time = !c.no_timestamp;
  const auto json = reports_to_json(reports, h, with_time).dump(2) + "\n";
  const auto csv = reports_to_csv(reports, with_time);

  bool ok = true;
  for (const auto& r : reports) ok = ok && r.passed();

  if (!c.out.empty()) {
    try {
      write_text_file(c.out + ".json", json);
      write_text_file(c.out + ".csv", csv);
    } catch (const FormatError& e) {
      throw IoFailure(e.what());
    }
  }
  if (c.json) {
    std::cout << json;
  } else {
    for (const auto& r : reports) {
      std::cout << std::left << std::setw(22) << r.id << std::setw(20) << to_string(r.outcome) << r.instances << " instances, "
                << r.failures << " failures";
      if (with_time) std::cout << ", " << std::fixed << std::setprecision(2) << r.seconds << " s";
      std::cout << "\n";
      if (!r.passed()) std::cout << "  witness: " << r.witness.dump() << "\n";
    }
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kPass : kMathFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nilpotent preprojective modules and Lusztig data"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common c;
  auto* roots = app.add_subcommand("roots", "print the root sequence of a reduced word");
  add_common(roots, c);
  roots->add_option("--word,word", c.word, "letters, 1-based")->expected(0, -1);

  std::string family;
  auto* modules = app.add_subcommand("modules", "dump the modules M_k, V_k or N(w varpi_j) of a reduced word");
  add_common(modules, c);
  modules->add_option("family", family, "M, V or N")->required()->check(CLI::IsMember({"M", "V", "N"}));
  modules->add_option("--word", c.word, "letters, 1-based")->expected(0, -1);

  std::string module_path;
  auto* extract = app.add_subcommand("extract", "read a Lusztig datum off a module dump");
  add_common(extract, c, false);
  extract->add_option("module", module_path, "module dump (JSON)")->required();
  extract->add_option("--word", c.word, "letters, 1-based")->expected(0, -1);

  std::string suite;
  VerifyArgs v;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, c);
  verify->add_option("suite", suite, "roots, reflection (lemma32), mutation, modules, parametrization (thm51), transitions, all")
      ->required();
  verify->add_option("--word", c.word, "letters, 1-based")->expected(0, -1);
  verify->add_option("--bound", v.bound, "grid bound for data");
  verify->add_option("--samples", v.samples, "samples per grid point");
  verify->add_option("--corpus", v.corpus, "random modules for the reflection contracts");
  verify->add_option("--max-len", v.max_len, "word length cap for roots and modules");
  verify->add_option("--threads", v.threads, "worker threads (0: all cores)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    if (*roots) return cmd_roots(c);
    if (*modules) return cmd_modules(c, family);
    if (*extract) return cmd_extract(c, module_path);
    if (*verify) return cmd_verify(c, suite, v);
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfrastructure;
  } catch (const UnknownSuite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfrastructure;
  } catch (const InvalidModule& e) {
    std::cerr << "invalid module: " << e.what() << "\n";
    return kBadModule;
  } catch (const InvalidInput& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfrastructure;
  }
  return kInfrastructure;
}
