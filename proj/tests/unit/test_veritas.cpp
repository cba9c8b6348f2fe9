#include <gtest/gtest.h>

#include "nilcrystal/veritas.hpp"

using namespace nilcrystal;

namespace {

const PrimeField kBig;

std::string without_time(const std::vector<CheckReport>& rs) {
  return reports_to_json(rs, OrderedJson::object(), false).dump();
}

}  // namespace

TEST(Report, OutcomeNames) {
  EXPECT_EQ(to_string(Outcome::Pass), "pass");
  EXPECT_EQ(to_string(Outcome::ProbabilisticPass), "probabilistic-pass");
  EXPECT_EQ(to_string(Outcome::VacuousPass), "vacuous-pass");
  EXPECT_EQ(to_string(Outcome::Fail), "fail");
}

TEST(Report, TimeIsOptional) {
  CheckReport r;
  r.id = "x";
  r.seconds = 1.5;
  EXPECT_TRUE(r.to_json(true).contains("seconds"));
  EXPECT_FALSE(r.to_json(false).contains("seconds"));
  EXPECT_EQ(reports_to_csv({r}, false), "check_id,outcome,instances,failures\nx,pass,0,0\n");
}

TEST(RandomModule, ExactDimensionAndValid) {
  const Engine<PrimeField> e(kBig);
  const auto g = CartanGraph::type_d(4);
  Rng rng(5);
  for (std::size_t d = 0; d < 10; ++d) {
    const auto m = random_module(e, g, d, rng);
    EXPECT_EQ(m.total_dim(), d);
    EXPECT_TRUE(e.satisfies_relations(m));
    EXPECT_TRUE(e.is_nilpotent(m));
  }
}

TEST(Checks, Roots) {
  for (const auto& g : {CartanGraph::type_a(3), CartanGraph::type_d(4), CartanGraph::affine_a1()}) {
    const auto r = check_roots(g, 5, 1);
    EXPECT_EQ(r.outcome, Outcome::Pass) << r.witness.dump();
    EXPECT_GT(r.instances, 0u);
  }
}

TEST(Checks, ReflectionContracts) {
  const Engine<PrimeField> e(kBig);
  for (const auto& g : {CartanGraph::type_a(3), CartanGraph::affine_a1()}) {
    const auto r = check_reflection(e, g, 20, 11, 8);
    EXPECT_EQ(r.outcome, Outcome::Pass) << r.witness.dump();
  }
  EXPECT_EQ(check_reflection(e, CartanGraph::type_a(2), 0, 1).outcome, Outcome::VacuousPass);
}

TEST(Checks, FlippedSignFailsWithWitness) {
  const Engine<PrimeField> flipped(kBig, EngineOptions{SignConvention::Flipped});
  const auto r = check_reflection(flipped, CartanGraph::type_a(3), 40, 2, 10);
  EXPECT_EQ(r.outcome, Outcome::Fail);
  EXPECT_GT(r.failures, 0u);
  ASSERT_TRUE(r.witness.contains("module"));
  EXPECT_EQ(r.witness["seed"], 2u);
}

TEST(Checks, MutationDetectedOrVacuous) {
  EXPECT_EQ(check_sign_mutation(kBig, CartanGraph::type_a(3), 30, 4).outcome, Outcome::Pass);
  EXPECT_EQ(check_sign_mutation(kBig, CartanGraph::type_d(4), 30, 4).outcome, Outcome::Pass);
  EXPECT_EQ(check_sign_mutation(kBig, CartanGraph::type_a(2), 30, 4).outcome, Outcome::VacuousPass);
  EXPECT_EQ(check_sign_mutation(kBig, CartanGraph::affine_a1(), 30, 4).outcome, Outcome::VacuousPass);
}

TEST(Checks, Modules) {
  const Engine<RationalField> e;
  const auto r = check_modules(e, CartanGraph::type_a(3), 6, 3);
  EXPECT_EQ(r.outcome, Outcome::Pass) << r.witness.dump();
  EXPECT_EQ(r.stats["words"], 65u);
}

TEST(Checks, ParametrizationAndTransitions) {
  const Engine<PrimeField> e(kBig);
  const auto g = CartanGraph::type_a(2);
  const auto p = check_parametrization(e, g, {0, 1, 0}, 2, 3, 9);
  EXPECT_EQ(p.outcome, Outcome::Pass) << p.witness.dump();
  EXPECT_EQ(p.stats["grid_points"], 27u);
  const auto t = check_transitions(e, g, {0, 1, 0}, 2, 2, 9);
  EXPECT_EQ(t.outcome, Outcome::Pass) << t.witness.dump();
  EXPECT_EQ(t.stats["moves"], 2u);
  // No braid move applies to any word of s_1 s_2 in A2.
  EXPECT_EQ(check_transitions(e, g, {0, 1}, 2, 2, 9).outcome, Outcome::VacuousPass);
}

TEST(Checks, SmallFieldMissesAreReported) {
  const Engine<PrimeField> e(PrimeField(3));
  const auto t = check_transitions(e, CartanGraph::type_a(3), {0, 1, 0, 2, 1, 0}, 1, 2, 1);
  const std::size_t samples = t.stats["samples"];
  const std::size_t first = t.stats["first_try_successes"];
  EXPECT_LT(first, samples);
  EXPECT_GT(t.stats["misses"].get<std::size_t>(), 0u);
}

TEST(Checks, TransitionFormula) { EXPECT_EQ(check_transition_formula().outcome, Outcome::Pass); }

TEST(Suite, DeterministicAcrossThreadCounts) {
  SuiteConfig cfg;
  cfg.suite = "all";
  cfg.graph = CartanGraph::type_a(2);
  cfg.field = FieldSpec::parse("prime:2147483659");
  cfg.seed = 42;
  cfg.corpus = 10;
  cfg.threads = 1;
  const auto one = run_suite(cfg);
  cfg.threads = 4;
  const auto four = run_suite(cfg);
  EXPECT_EQ(without_time(one), without_time(four));
  for (const auto& r : one) EXPECT_TRUE(r.passed()) << r.id;
  EXPECT_EQ(one.front().id, "transition-formula");
}

TEST(Suite, Aliases) {
  SuiteConfig cfg;
  cfg.graph = CartanGraph::type_a(2);
  cfg.corpus = 5;
  cfg.threads = 1;
  cfg.suite = "thm51";
  EXPECT_EQ(run_suite(cfg).back().id, "parametrization");
  cfg.suite = "lemma32";
  EXPECT_EQ(run_suite(cfg)[1].id, "reflection");
}

TEST(Suite, BadInput) {
  SuiteConfig cfg;
  cfg.graph = CartanGraph::type_a(2);
  cfg.suite = "nonsense";
  EXPECT_THROW(run_suite(cfg), UnknownSuite);
  cfg.suite = "parametrization";
  cfg.word = WeylWord{0, 0};
  EXPECT_THROW(run_suite(cfg), NonReducedWord);
  cfg.word = WeylWord{0, 7};
  EXPECT_THROW(run_suite(cfg), InvalidInput);
}

TEST(RunJobs, MathErrorsBecomeFailures) {
  std::vector<Job> jobs{{"boom", [](std::uint64_t) -> CheckReport { throw InternalRelationFailure("bad"); }},
                        {"ok", [](std::uint64_t s) {
                           CheckReport r;
                           r.id = "ok";
                           r.instances = s == mix_seed(7, 1) ? 1 : 0;
                           return r;
                         }}};
  const auto rs = run_jobs(jobs, 7, 2);
  EXPECT_EQ(rs[0].outcome, Outcome::Fail);
  EXPECT_EQ(rs[1].instances, 1u);
  std::vector<Job> bad{{"x", [](std::uint64_t) -> CheckReport { throw InvalidInput("nope"); }}};
  EXPECT_THROW(run_jobs(bad, 0, 1), InvalidInput);
}
