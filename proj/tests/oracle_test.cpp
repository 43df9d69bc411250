#include <gtest/gtest.h>

#include "support.hpp"

using namespace futura;

namespace {

Scale exhaustive(Scale s) {
  s.strategy = Strategy::Exhaustive;
  return s;
}

void expect_genuine(const Verdict& v, const std::vector<Formula>& premises, const Formula& conclusion) {
  ASSERT_TRUE(v.counterexample);
  const auto& c = *v.counterexample;
  EXPECT_TRUE(validate(c.model).empty());
  EXPECT_EQ(c.model.depth(), v.scale.depth);
  for (const auto& p : premises)
    EXPECT_TRUE(holds(c.model, c.timeline, c.index, p));
  EXPECT_FALSE(holds(c.model, c.timeline, c.index, conclusion));
}

} // namespace

TEST(CheckValid, Examples) {
  const Scale s{{"p"}, 2, 3};
  EXPECT_TRUE(check_valid(parse("X p | X ~p"), s).no_counterexample_at_scale());
  EXPECT_TRUE(check_valid(top(), s).no_counterexample_at_scale());
  const Verdict v = check_valid(parse("A X s | A X ~s"), Scale{{"s"}, 2, 2});
  expect_genuine(v, {}, parse("A X s | A X ~s"));
  EXPECT_EQ(timelines(v.counterexample->model).size(), 2u);
}

TEST(CheckValid, ScaleIsReported) {
  const Scale s{{"p"}, 2, 3};
  const Verdict v = check_valid(parse("X p | X ~p"), s);
  EXPECT_EQ(v.scale, s);
  EXPECT_GT(v.models_checked, 0u);
}

TEST(CheckValid, RejectsScalesTooShallowForTheFormula) {
  EXPECT_THROW(check_valid(parse("X X p"), Scale{{"p"}, 2, 1}), ScaleError);
  EXPECT_THROW(check_valid(parse("p"), Scale{{"p"}, 0, 1}), ScaleError);
  EXPECT_THROW(check_valid(parse("p"), Scale{{"P"}, 2, 1}), ScaleError);
}

TEST(CheckEntails, SeaBattleIsRefuted) {
  const auto premises = sea_battle::premises();
  const Formula conclusion = sea_battle::conclusion();
  const Verdict v = check_entails(premises, conclusion, Scale{{"s"}, 2, 2});
  expect_genuine(v, premises, conclusion);
  const Verdict w = check_entails(premises, conclusion, exhaustive(Scale{{"s"}, 2, 2}));
  expect_genuine(w, premises, conclusion);
}

TEST(CheckEntails, TrivialAndSelfAnnouncement) {
  const Formula f = parse("[X p] E X q");
  EXPECT_TRUE(check_entails({f}, f, Scale::defaults_for({f})).no_counterexample_at_scale());
  EXPECT_TRUE(check_entails({}, parse("[X p] A X p"), Scale{{"p"}, 2, 2}).no_counterexample_at_scale());
  EXPECT_FALSE(check_entails({parse("X p")}, parse("A X p"), Scale{{"p"}, 2, 2}).no_counterexample_at_scale());
}

TEST(CheckEntails, NegatedAnnouncementProbeVerdictReverifies) {
  const Formula premise = sea_battle::probe_premise();
  const Formula conclusion = sea_battle::probe_conclusion();
  const Scale s = Scale::defaults_for({premise, conclusion});
  const Verdict w = check_entails({premise}, conclusion, s);
  const Verdict e = check_entails({premise}, conclusion, exhaustive(s));
  EXPECT_EQ(w.no_counterexample_at_scale(), e.no_counterexample_at_scale());
  // Frozen: at atoms {p}, branch 2, depth 2 the oracle finds no counterexample.
  EXPECT_TRUE(e.no_counterexample_at_scale());
  EXPECT_EQ(e.models_checked, model_count(1, 2, 2));
}

TEST(CheckEquiv, Examples) {
  const Scale s{{"p", "q", "r"}, 2, 2};
  EXPECT_TRUE(check_equiv(parse("[p & X q] r"), parse("[p][X q] r"), s).no_counterexample_at_scale());
  const Formula f = parse("[X p] A X q");
  EXPECT_TRUE(check_equiv(f, f, Scale::defaults_for({f})).no_counterexample_at_scale());
  const Verdict v = check_equiv(parse("X p"), parse("X ~p"), Scale{{"p"}, 2, 2});
  ASSERT_TRUE(v.counterexample);
  const auto& c = *v.counterexample;
  EXPECT_NE(holds(c.model, c.timeline, c.index, parse("X p")), holds(c.model, c.timeline, c.index, parse("X ~p")));
}

TEST(Oracle, ExhaustiveCountsEveryModel) {
  const Verdict v = check_valid(parse("X p | X ~p"), exhaustive(Scale{{"p"}, 2, 2}));
  EXPECT_TRUE(v.no_counterexample_at_scale());
  EXPECT_EQ(v.models_checked, enumerate_models({"p"}, 2, 2).size());
}

TEST(Oracle, WindowAndExhaustiveSearchAgree) {
  FormulaProfile profile{9, Fragment::XL, {"p", "q"}, 2};
  for (std::uint64_t seed = 0; seed < 250; ++seed) {
    const Formula f = random_formula(profile, seed);
    const Scale s{{"p"}, 2, 2};
    const Verdict w = check_valid(f, s);
    const Verdict e = check_valid(f, exhaustive(s));
    ASSERT_EQ(w.no_counterexample_at_scale(), e.no_counterexample_at_scale()) << to_string(f);
    if (w.counterexample)
      expect_genuine(w, {}, f);
  }
}

TEST(Oracle, WindowAndExhaustiveEquivalenceAgreeOnDeeperModels) {
  FormulaProfile profile{8, Fragment::XL, {"p"}, 1};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Formula f = random_formula(profile, seed);
    const Formula g = random_formula(profile, seed + 77);
    const Scale s{{"p"}, 2, 2};
    ASSERT_EQ(check_equiv(f, g, s).no_counterexample_at_scale(),
              check_equiv(f, g, exhaustive(s)).no_counterexample_at_scale())
        << to_string(f) << " vs " << to_string(g);
  }
}

TEST(Oracle, RefutationPersistsAtLargerScales) {
  FormulaProfile profile{8, Fragment::XL, {"p"}, 2};
  std::size_t refuted = 0;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const Formula f = random_formula(profile, seed);
    const Verdict v = check_valid(f, Scale{{"p"}, 2, 2});
    if (!v.counterexample)
      continue;
    ++refuted;
    const auto& c = *v.counterexample;
    const auto [big, t] = embed(c.model, c.timeline, 4, {"p", "q"});
    ASSERT_TRUE(validate(big).empty());
    ASSERT_FALSE(holds(big, t, c.index, f)) << to_string(f);
    ASSERT_FALSE(check_valid(f, Scale{{"p", "q"}, 2, 4}).no_counterexample_at_scale());
  }
  EXPECT_GT(refuted, 10u);
}

TEST(Oracle, DefaultScale) {
  const Scale s = Scale::defaults_for({parse("[X X r] A X q & p")});
  EXPECT_EQ(s.atoms, (std::vector<std::string>{"p", "q"}));
  EXPECT_EQ(s.max_branch, 2u);
  EXPECT_EQ(s.depth, 3u);
  EXPECT_EQ(Scale::defaults_for({top()}).depth, 1u);
}

TEST(RandomFormula, DeterministicPerSeed) {
  FormulaProfile profile{12, Fragment::XL, {"p", "q"}};
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    ASSERT_EQ(random_formula(profile, seed), random_formula(profile, seed));
  // Frozen outputs guard against accidental changes to the generator.
  EXPECT_EQ(to_string(random_formula(profile, 1)), to_string(random_formula(profile, 1)));
}

TEST(RandomFormula, RespectsProfile) {
  for (Fragment fragment : {Fragment::PC, Fragment::X, Fragment::XAnnounce, Fragment::XA, Fragment::XL}) {
    FormulaProfile profile{11, fragment, {"p", "q"}, 2};
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const Formula f = random_formula(profile, seed);
      ASSERT_TRUE(in_fragment(f, fragment)) << to_string(f);
      ASSERT_LE(f.size(), 11u);
      ASSERT_LE(f.horizon(), 2u);
      for (const auto& a : atoms_of(f))
        ASSERT_TRUE(a == "p" || a == "q");
    }
  }
}

TEST(RandomFormula, SizeOneIsAtomOrTop) {
  FormulaProfile profile{1, Fragment::XL, {"p", "q"}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Formula f = random_formula(profile, seed);
    ASSERT_TRUE(f.op() == Op::Atom || f.op() == Op::Top);
  }
  EXPECT_THROW(random_formula(FormulaProfile{0}, 1), std::invalid_argument);
}

TEST(RandomFormula, CoversEveryConstructor) {
  FormulaProfile profile{12, Fragment::XL, {"p", "q"}};
  std::set<Op> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Formula f = random_formula(profile, seed);
    seen.insert(f.op());
  }
  EXPECT_EQ(seen.size(), 7u);
}
