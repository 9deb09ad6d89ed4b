#include <gtest/gtest.h>

#include "support.hpp"

using namespace comb;

namespace {

CombingSpec shortlex_z2() {
  auto z = AbelianModel::free_abelian(2);
  return {shortlex_free_abelian(*z), z, {Synchronicity::Synchronous, true}, std::nullopt};
}

Word p(const CombingSpec& s, const std::string& w) { return s.model->generators().parse(w); }

}  // namespace

TEST(StepMultiplier, Examples) {
  auto s = shortlex_z2();
  WpContext ctx(s, 2);
  EXPECT_EQ(step_multiplier(ctx, p(s, "a"), s.model->generators().require("b")), p(s, "a b"));
  EXPECT_EQ(step_multiplier(ctx, p(s, "a b"), s.model->generators().require("a")), p(s, "a a b"));
  EXPECT_EQ(step_multiplier(ctx, p(s, "a"), s.model->generators().require("a^-1")), Word{});
  EXPECT_THROW(step_multiplier(ctx, p(s, "a"), 9), Error);
}

TEST(StepMultiplier, OutputIsMemberAndCorrect) {
  for (const char* group : {"free_abelian:2", "free:2", "cyclic:4"}) {
    auto s = builtin_combing("shortlex", group);
    WpContext ctx(s, 2);
    const auto& gens = s.model->generators();
    for (const auto& u : s.language.enumerate(4))
      for (Letter x = 0; x < gens.size(); ++x) {
        Word w = step_multiplier(ctx, u, x);
        EXPECT_TRUE(s.language.member(w));
        EXPECT_TRUE(equal_in_group(*s.model, evaluate(*s.model, w), s.model->act(evaluate(*s.model, u), x)));
      }
  }
}

TEST(ReduceToNormal, Examples) {
  auto s = shortlex_z2();
  WpContext ctx(s, 2, p(s, "a a b"));
  EXPECT_EQ(identity_representative(ctx), Word{});
  EXPECT_EQ(reduce_to_normal(ctx, p(s, "b a")), p(s, "a b"));
  EXPECT_EQ(reduce_to_normal(ctx, {}), Word{});
  EXPECT_EQ(reduce_to_normal(ctx, p(s, "a a^-1")), Word{});
  EXPECT_THROW(WpContext(s, 2, p(s, "b a")), Error);
}

TEST(ReduceToNormal, IdempotentOnBijectiveLanguage) {
  auto s = builtin_combing("shortlex", "free:2");
  WpContext ctx(s, 2);
  for (const auto& w : s.language.enumerate(4)) EXPECT_EQ(reduce_to_normal(ctx, w), w);
}

TEST(IsTrivial, Examples) {
  auto z = shortlex_z2();
  WpContext cz(z, 2);
  EXPECT_TRUE(is_trivial(cz, p(z, "a b a^-1 b^-1")));
  EXPECT_FALSE(is_trivial(cz, p(z, "a b a^-1")));

  auto f = builtin_combing("shortlex", "free:2");
  WpContext cf(f, 2);
  EXPECT_FALSE(is_trivial(cf, p(f, "a b a^-1 b^-1")));
  EXPECT_TRUE(is_trivial(cf, p(f, "a b b^-1 a^-1")));

  auto h = builtin_combing("heisenberg", "heisenberg:1");
  WpContext ch(h, 2);
  EXPECT_TRUE(is_trivial(ch, p(h, "a^-1 b^-1 a b c^-1")));
  EXPECT_FALSE(is_trivial(ch, p(h, "a^-1 b^-1 a b")));
}

TEST(IsTrivial, NonBijectiveLanguage) {
  // (a|a⁻¹)* over Z: ε and a a⁻¹ both represent e.
  auto z = AbelianModel::free_abelian(1);
  Language all = Language::from_fsa(z->generators(), universal_language(z->generators().names()), "all");
  CombingSpec s{all, z, {Synchronicity::Synchronous, false}, std::nullopt};
  WpContext ctx(s, 2);
  EXPECT_TRUE(represents_identity(ctx, p(s, "a a^-1")));
  EXPECT_FALSE(represents_identity(ctx, p(s, "a a")));
  for (const auto& w : oracle::all_words(2, 6))
    EXPECT_EQ(is_trivial(ctx, w), is_identity_element(*z, evaluate(*z, w)));
}

TEST(IsTrivial, AgreesWithModel) {
  for (const char* group : {"free_abelian:2", "free:2", "cyclic:4"}) {
    auto s = builtin_combing("auto", group);
    WpContext ctx(s, 2);
    ctx.bijective = true;
    const auto& m = *s.model;
    for (const auto& w : oracle::all_words(m.generators().size(), 5))
      EXPECT_EQ(is_trivial(ctx, w), is_identity_element(m, evaluate(m, w))) << group << " " << m.generators().format(w);
  }
}

TEST(IsTrivial, ProceduralFallback) {
  auto h = builtin_combing("heisenberg", "heisenberg:1");
  Language no_lookup = h.language;
  no_lookup.lookup = nullptr;
  CombingSpec s{no_lookup, h.model, h.claimed, std::nullopt};
  WpContext ctx(s, 2, std::nullopt, 4);
  EXPECT_TRUE(is_trivial(ctx, p(s, "a^-1 b^-1 a b c^-1")));
  WpContext tiny(s, 2, std::nullopt, 0);
  try {
    reduce_to_normal(tiny, p(s, "a"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFoundWithinBound);
  }
}
