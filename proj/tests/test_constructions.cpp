#include <gtest/gtest.h>

#include "support.hpp"

using namespace comb;

namespace {

std::shared_ptr<AbelianModel> z1(const std::string& name) { return AbelianModel::free_abelian(1, {name}); }

Language words_language(const GeneratorSet& g, const std::vector<std::string>& ws, const std::string& name) {
  std::vector<Word> out;
  for (const auto& s : ws) out.push_back(g.parse(s));
  return Language::from_fsa(g, from_words(g.names(), out), name);
}

std::set<Word> as_set(const std::vector<Word>& ws) { return {ws.begin(), ws.end()}; }

/// Shortlex-least member of each element among the slice.
std::set<Word> shortlex_minima(const GroupModel& m, const std::vector<Word>& ws) {
  std::map<Key, Word> best;
  for (const auto& w : ws) {
    Key k = m.key(evaluate(m, w));
    auto it = best.find(k);
    if (it == best.end() || shortlex_less(w, it->second)) best[k] = w;
  }
  std::set<Word> out;
  for (const auto& [k, w] : best) out.insert(w);
  return out;
}

bool reduced(const GeneratorSet& g, const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == g.inverse(w[i - 1])) return false;
  return true;
}

VerificationReport sweep(const Language& l, ModelPtr m, CombingType t, int radius, std::size_t len) {
  return verify({l, std::move(m), t, std::nullopt}, radius, len);
}

const CombingType kSyncBi{Synchronicity::Synchronous, true};
const CombingType kSync{Synchronicity::Synchronous, false};
const CombingType kAsync{Synchronicity::Asynchronous, false};
const CombingType kAsyncBi{Synchronicity::Asynchronous, true};

/// F₂ ⊇ H = {even exponent sum in a}, right cosets H and H·a.
Transversal even_a_transversal() {
  Transversal t;
  t.reps = {{}, {0}};
  t.names = {"e", "t"};
  t.coset_of = [](const Element& e) -> std::optional<std::size_t> {
    std::int64_t s = 0;
    for (auto x : e) s += x == 0 ? 1 : x == 1 ? -1 : 0;
    return static_cast<std::size_t>(((s % 2) + 2) % 2);
  };
  return t;
}

}  // namespace

TEST(Bijectivize, DropsLargerEqualWords) {
  auto z = z1("a");
  Language l = words_language(z->generators(), {"1", "a", "a a^-1"}, "small");
  Language b = bijectivize_shortlex(l, z, 2);
  EXPECT_EQ(as_set(b.enumerate(4)), (std::set<Word>{{}, {0}}));
}

TEST(Bijectivize, AllWordsOverZ) {
  auto z = z1("a");
  Language all = Language::from_fsa(z->generators(), universal_language(z->generators().names()), "all");
  Language b = bijectivize_shortlex(all, z, 2);
  auto slice = all.enumerate(4);
  EXPECT_EQ(as_set(b.enumerate(4)), shortlex_minima(*z, slice));
  for (const auto& w : b.enumerate(6)) EXPECT_TRUE(all.member(w));
}

TEST(Bijectivize, BijectiveInputUnchanged) {
  auto z = AbelianModel::free_abelian(2);
  Language l = shortlex_free_abelian(*z);
  Language b = bijectivize_shortlex(l, z, 2);
  EXPECT_EQ(b.enumerate(6), l.enumerate(6));
  EXPECT_TRUE(classify_flags(b, *z, 5).bijective);
  Language proc = l;
  proc.carrier = nullptr;
  EXPECT_THROW(bijectivize_shortlex(proc, z, 2), Error);
}

TEST(Quotient, ZTimesZ2ModuloTorsion) {
  auto g = std::make_shared<AbelianModel>(std::vector<std::int64_t>{0, 2}, std::vector<std::string>{"a", "s"});
  const auto& gens = g->generators();
  Fsa powers = union_of(star(from_words(gens.names(), {gens.parse("a")})),
                        star(from_words(gens.names(), {gens.parse("a^-1")})));
  Language l = Language::from_fsa(gens, concatenation(powers, from_words(gens.names(), {{}, gens.parse("s")})), "a^n s^d");
  EXPECT_TRUE(sweep(l, g, kSyncBi, 3, 6).pass());
  auto q = quotient_by_finite_normal(l, g, {gens.parse("s")});
  EXPECT_EQ(q.language.enumerate(5), l.enumerate(5));
  auto r = sweep(q.language, q.model, kSyncBi, 3, 6);
  EXPECT_TRUE(r.pass());
  EXPECT_TRUE(r.coverage_ok);
  EXPECT_FALSE(r.flags.bijective);

  auto trivial = quotient_by_finite_normal(l, g, {});
  EXPECT_EQ(ball(*trivial.model, 3).size(), ball(*g, 3).size());
}

TEST(Quotient, RejectsNonNormal) {
  auto f = FreeGroupModel::of_rank(2);
  Language l = shortlex_free(f->generators());
  try {
    quotient_by_finite_normal(l, f, {f->generators().parse("a")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormal);
  }
}

TEST(Lift, Z4FromZ2) {
  auto g = AbelianModel::cyclic(4, "g");
  auto q = AbelianModel::cyclic(2, "x");
  Language lq = words_language(q->generators(), {"1", "x"}, "Z/2");
  auto r = lift_from_quotient(lq, g, {{"g", {0}}}, {{"n", {0, 0}}});
  const auto& j = r.model->generators();
  EXPECT_EQ(as_set(r.language.enumerate(3)),
            (std::set<Word>{{}, j.parse("g"), j.parse("n"), j.parse("g n")}));
  KeySet keys;
  for (const auto& w : r.language.enumerate(3)) keys.insert(r.model->key(evaluate(*r.model, w)));
  EXPECT_EQ(keys.size(), 4u);
  EXPECT_TRUE(sweep(r.language, r.model, kSyncBi, 2, 3).pass());
}

TEST(Lift, RoundTripCoversTheSameBall) {
  auto g = std::make_shared<AbelianModel>(std::vector<std::int64_t>{0, 2}, std::vector<std::string>{"a", "s"});
  auto z = z1("a'");
  Language lq = shortlex_free_abelian(*z);
  auto r = lift_from_quotient(lq, g, {{"a", {0}}, {"a^-1", {1}}}, {{"s", {2}}});
  auto rep = sweep(r.language, r.model, kSyncBi, 3, 6);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.flags.bijective);
  KeySet covered;
  for (const auto& w : r.language.enumerate(6)) covered.insert(g->key(evaluate(*r.model, w)));
  Ball b = ball(*g, 3);
  for (const auto& e : b.entries()) EXPECT_TRUE(covered.count(e.key));
}

TEST(Overgroup, EvenIntegersInZ) {
  auto j = z1("g");
  auto two = z1("a");
  Language l = shortlex_free_abelian(*two);
  Transversal t;
  t.reps = {{}, {0}};
  t.names = {"e", "t"};
  t.coset_of = [](const Element& e) -> std::optional<std::size_t> {
    return static_cast<std::size_t>(((e[0] % 2) + 2) % 2);
  };
  auto r = extend_to_overgroup(l, j, {{0, 0}, {1, 1}}, t, 4);
  const auto& x = r.model->generators();
  EXPECT_TRUE(r.language.member(x.parse("a a t")));
  EXPECT_TRUE(r.language.member(x.parse("a^-1 t")));
  EXPECT_FALSE(r.language.member(x.parse("t a")));
  auto rep = sweep(r.language, r.model, kSync, 3, 6);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.coverage_ok);

  Transversal one;
  one.reps = {{}};
  one.names = {"e"};
  one.coset_of = [](const Element&) -> std::optional<std::size_t> { return 0; };
  auto same = extend_to_overgroup(l, two, {{0}, {1}}, one, 3);
  EXPECT_EQ(same.language.enumerate(5), l.enumerate(5));

  Transversal missing = t;
  missing.coset_of = [](const Element& e) -> std::optional<std::size_t> {
    if (e[0] % 2 == 0) return 0;
    if (e[0] == 1) return 1;
    return std::nullopt;
  };
  try {
    extend_to_overgroup(l, j, {{0, 0}, {1, 1}}, missing, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndexNotFinite);
  }
  Transversal left = t;
  left.side = Transversal::Side::Left;
  EXPECT_THROW(extend_to_overgroup(l, j, {{0, 0}, {1, 1}}, left, 4), Error);
}

TEST(IdentityLetters, RemovesEveryOtherAndReplaces) {
  auto z = z1("a");
  auto with_e = std::make_shared<WordGeneratedModel>(z, std::vector<WordGeneratedModel::Spec>{{"a", {0}}, {"e", {}}});
  const GeneratorSet& in = with_e->generators();
  const GeneratorSet& out = z->generators();
  Word we = out.parse("a a^-1");
  Language l = words_language(in, {"a e a e e a", "e", "a a^-1 a"}, "sample");
  Language r = remove_identity_letters(l, out, 2, we, z.get());
  EXPECT_EQ(as_set(r.enumerate(6)), (std::set<Word>{out.parse("a a a a^-1 a"), {}, out.parse("a a^-1 a")}));

  Language proc = l;
  proc.carrier = nullptr;
  Language rp = remove_identity_letters(proc, out, 2, we, z.get());
  EXPECT_EQ(rp.enumerate(6), r.enumerate(6));
  EXPECT_THROW(remove_identity_letters(l, out, 2, out.parse("a a"), z.get()), Error);
  EXPECT_THROW(remove_identity_letters(l, out, 3, we, z.get()), Error);
}

TEST(IdentityLetters, SweepKeepsTheCombing) {
  auto z = z1("a");
  auto with_e = std::make_shared<WordGeneratedModel>(z, std::vector<WordGeneratedModel::Spec>{{"a", {0}}, {"e", {}}});
  const GeneratorSet& in = with_e->generators();
  const auto names = in.names();
  Fsa ae = star(from_words(names, {in.parse("a e")}));
  Fsa inv = star(from_words(names, {in.parse("a^-1")}));
  Language l = Language::from_fsa(in, union_of(ae, inv), "(ae)*|A*");
  EXPECT_TRUE(sweep(l, with_e, kAsync, 3, 8).pass());
  Language r = remove_identity_letters(l, z->generators(), 2, z->generators().parse("a a^-1"), z.get());
  auto rep = sweep(r, z, kAsync, 3, 8);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.coverage_ok);
}

TEST(ChangeGenerators, PadsAndSubstitutes) {
  auto z = AbelianModel::free_abelian(2);
  auto y = std::make_shared<WordGeneratedModel>(
      z, std::vector<WordGeneratedModel::Spec>{{"x", {0}}, {"y", {0, 2}}, {"e", {}}});
  const GeneratorSet& yg = y->generators();
  Language l = shortlex_free_abelian(*z);
  std::vector<std::optional<Word>> images{yg.parse("x e"), std::nullopt, yg.parse("x^-1 y"), std::nullopt};
  Language r = change_generators(l, yg, images, std::nullopt, z.get(), y.get());
  EXPECT_TRUE(r.member(yg.parse("x e x^-1 y")));
  EXPECT_FALSE(r.member(yg.parse("x^-1 y x e")));
  for (const auto& w : r.enumerate(8)) EXPECT_EQ(w.size() % 2, 0u);
  auto rep = sweep(r, y, kSyncBi, 3, 12);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.coverage_ok);

  try {
    change_generators(l, yg, images, std::size_t{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthNotEqualizable);
  }
  auto same = change_generators(l, z->generators(), {Word{0}, Word{1}, Word{2}, Word{3}}, std::size_t{1});
  EXPECT_EQ(same.enumerate(5), l.enumerate(5));
}

TEST(Schreier, IndexTwoSubgroupOfF2) {
  auto f = FreeGroupModel::of_rank(2);
  Language l = shortlex_free(f->generators());
  auto res = schreier_subgroup_combing(l, f, even_a_transversal());
  const GeneratorSet& y = res.model->generators();
  EXPECT_EQ(y.size(), 7u);
  // Every output evaluates to its input, and only inputs in H survive.
  auto t = even_a_transversal();
  std::size_t in_h = 0;
  for (const auto& w : l.enumerate(5)) {
    auto outs = gsm_run(res.gsm, w);
    bool member = *t.coset_of(evaluate(*f, w)) == 0;
    in_h += member;
    EXPECT_EQ(outs.size(), member ? 1u : 0u);
    for (const auto& o : outs) EXPECT_EQ(f->key(evaluate(*res.model, o)), f->key(evaluate(*f, w)));
  }
  EXPECT_GT(in_h, 0u);
  auto rep = sweep(res.language, res.model, kSync, 2, 6);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.coverage_ok);
  EXPECT_TRUE(rep.flags.bijective);

  Transversal whole;
  whole.reps = {{}};
  whole.names = {"e"};
  whole.coset_of = [](const Element&) -> std::optional<std::size_t> { return 0; };
  auto same = schreier_subgroup_combing(l, f, whole);
  EXPECT_EQ(same.language.enumerate(4).size(), l.enumerate(4).size());
}

TEST(FreeProduct, ZStarZIsReducedWords) {
  auto a = z1("a"), b = z1("b");
  auto r = free_product(shortlex_free_abelian(*a), shortlex_free_abelian(*b), a, b, 4, kSyncBi);
  const GeneratorSet& g = r.model->generators();
  std::set<Word> reduced_words;
  for (const auto& w : oracle::all_words(4, 5))
    if (reduced(g, w)) reduced_words.insert(w);
  EXPECT_EQ(as_set(r.language.enumerate(5)), reduced_words);
  auto rep = sweep(r.language, r.model, kSyncBi, 3, 6);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.flags.bijective);
}

TEST(FreeProduct, DropsIdentityRepresentatives) {
  auto a = z1("a"), b = z1("b");
  Language la = shortlex_free_abelian(*a);
  Language extra = Language::from_fsa(
      a->generators(), union_of(*la.carrier, from_words(a->generators().names(), {a->generators().parse("a a^-1")})),
      "with aA");
  EXPECT_THROW(free_product(extra, shortlex_free_abelian(*b), a, b, 4, kSyncBi), Error);
  auto r = free_product(extra, shortlex_free_abelian(*b), a, b, 4, kAsync);
  auto plain = free_product(la, shortlex_free_abelian(*b), a, b, 4, kAsync);
  EXPECT_EQ(r.language.enumerate(5), plain.language.enumerate(5));
  // Words over the first alphabet alone are exactly L'_1.
  for (const auto& w : r.language.enumerate(5)) {
    bool first_only = std::all_of(w.begin(), w.end(), [](Letter x) { return x < 2; });
    if (first_only) {
      EXPECT_TRUE(w.empty() || la.member(w));
    }
  }
  Language proc_a = la, proc_b = shortlex_free_abelian(*b);
  proc_a.carrier = proc_b.carrier = nullptr;
  auto p = free_product(proc_a, proc_b, a, b, 4, kAsync);
  EXPECT_EQ(p.language.enumerate(5), plain.language.enumerate(5));
}

TEST(DirectProduct, ZTimesZ) {
  auto a = z1("a"), b = z1("b");
  auto r = direct_product(shortlex_free_abelian(*a), shortlex_free_abelian(*b), a, b, kSyncBi, kSyncBi, true);
  ASSERT_EQ(r.promised.size(), 2u);
  EXPECT_EQ(r.promised[0], kAsyncBi);
  EXPECT_EQ(r.promised[1], kSync);
  for (const auto& t : r.promised) EXPECT_TRUE(sweep(r.language, r.model, t, 3, 6).pass()) << t.to_string();
  EXPECT_TRUE(classify_flags(r.language, *r.model, 5).bijective);
  EXPECT_EQ(direct_product_types(kSyncBi, kAsync, false), (std::vector<CombingType>{kAsync}));
}

TEST(DirectProduct, ZTimesF2) {
  auto a = z1("z");
  auto f = FreeGroupModel::of_rank(2);
  auto r = direct_product(shortlex_free_abelian(*a), shortlex_free(f->generators()), a, f, kSyncBi, kSyncBi, true);
  EXPECT_TRUE(sweep(r.language, r.model, r.promised[0], 3, 6).pass());
}

TEST(CentralExtension, Z4OverZ2) {
  auto h = AbelianModel::cyclic(2, "x");
  auto a = std::shared_ptr<const AbelianModel>(AbelianModel::cyclic(2, "z"));
  Language l = words_language(h->generators(), {"1", "x"}, "Z/2");
  const auto& hx = h->generators().names();
  CocycleData data{h, a,
                   [](const Element& p, const Element& q) { return Element{p[0] == 1 && q[0] == 1 ? 1 : 0}; },
                   {{0}, {1}},
                   {{from_words(hx, {{}}), from_words(hx, {{0}})}}};
  Language la = words_language(a->generators(), {"1", "z"}, "Z/2");
  auto r = central_extension(l, data, la, kSyncBi, true);
  const GeneratorSet& g = r.model->generators();
  Letter y = g.require(y_letter_name("x", {0}));
  Letter z = g.require("z");
  EXPECT_EQ(as_set(r.language.enumerate(3)), (std::set<Word>{{}, {y}, {z}, {y, z}}));
  KeySet keys;
  for (const auto& w : r.language.enumerate(3)) keys.insert(r.model->key(evaluate(*r.model, w)));
  EXPECT_EQ(keys.size(), 4u);
  for (const auto& t : r.promised) EXPECT_TRUE(sweep(r.language, r.model, t, 2, 3).pass());

  CocycleData bad = data;
  std::swap(bad.witnesses[0][0], bad.witnesses[0][1]);
  try {
    central_extension(l, bad, la);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WitnessPartitionViolation);
  }
}

TEST(CentralExtension, TrivialCocycleIsDirectProduct) {
  auto h = z1("a");
  auto a = std::shared_ptr<const AbelianModel>(z1("z"));
  Language l = shortlex_free_abelian(*h);
  Language la = shortlex_free_abelian(*a);
  std::vector<std::vector<Fsa>> all{{*l.carrier}, {*l.carrier}};
  CocycleData data{h, a, [](const Element&, const Element&) { return Element{0}; }, {{0}}, all};
  auto r = central_extension(l, data, la, kSyncBi, true);
  auto d = direct_product(l, la, h, a);
  const GeneratorSet& g = r.model->generators();
  std::vector<Letter> to_d;
  for (Letter x = 0; x < g.size(); ++x) {
    std::string nm = g.name(x);
    if (nm.starts_with("y[")) nm = nm.substr(2, nm.find(';') - 2);
    to_d.push_back(d.model->generators().require(nm));
  }
  std::set<Word> mapped;
  for (const auto& w : r.language.enumerate(6)) {
    Word o;
    for (Letter x : w) o.push_back(to_d[x]);
    mapped.insert(o);
  }
  EXPECT_EQ(mapped, as_set(d.language.enumerate(6)));
  for (const auto& t : r.promised) EXPECT_TRUE(sweep(r.language, r.model, t, 3, 6).pass()) << t.to_string();
}

TEST(SplitExtension, SolExample) {
  auto s = sol_split();
  const GeneratorSet& g = s.spec.model->generators();
  EXPECT_TRUE(s.spec.language.member(g.parse("x y")));
  auto w = s.spec.language.lookup(evaluate(*s.spec.model, g.parse("x y")));
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, g.parse("x y"));
  auto rep = verify(s.spec, 2, 8);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.coverage_ok);
  EXPECT_TRUE(rep.flags.bijective);
}

TEST(SplitExtension, TrivialActionBehavesLikeDirectProduct) {
  auto h = z1("x");
  auto n = AbelianModel::free_abelian(2, {"y", "z"});
  Language lh = shortlex_free_abelian(*h), ln = shortlex_free_abelian(*n);
  ActionFn id = [](Letter, const Element& e) { return e; };
  auto data = make_action_data(h, n, id, ln.lookup);
  check_action(data, 2);
  auto r = split_extension(lh, ln, data);
  auto d = direct_product(lh, ln, h, n);
  EXPECT_EQ(r.language.enumerate(5), d.language.enumerate(5));
  Language no_lookup = ln;
  no_lookup.lookup = nullptr;
  try {
    split_extension(lh, no_lookup, data);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingLookup);
  }
}

TEST(SplitExtension, HeisenbergSweep) {
  auto s = heisenberg_split(1);
  auto rep = verify(s.spec, 2, 8);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(rep.coverage_ok);
}

TEST(ConditionStar, FibonacciAction) {
  auto s = sol_split();
  const auto& n = *s.action.n_model;
  Element y = n.act(n.identity(), 0);
  EXPECT_EQ(s.l_n.lookup(y), (Word{0}));
  // y^x = z: the image of "y" is "z", which is v_z itself. Unit-step travel
  // counts the single diagonal move as distance 1.
  EXPECT_EQ(s.action.act_gen[0][0], (Word{2}));
  EXPECT_EQ(s.l_n.lookup(s.action.action(0, y)), (Word{2}));
  auto one = check_condition_star(s.l_n, s.action, 1, 10);
  EXPECT_LE(one.max_K, 2);
  auto rep = check_condition_star(s.l_n, s.action, 3, 20);
  EXPECT_GT(rep.checked, 0u);
  ASSERT_TRUE(rep.worst_n);
  EXPECT_THROW(check_condition_star(s.l_n, s.action, 0, 5), Error);
}

TEST(ConditionStar, TrivialAction) {
  auto h = z1("x");
  auto n = AbelianModel::free_abelian(2, {"y", "z"});
  Language ln = zn_straightline(n);
  auto data = make_action_data(h, n, [](Letter, const Element& e) { return e; }, ln.lookup);
  auto rep = check_condition_star(ln, data, 3, 10);
  EXPECT_EQ(rep.max_K, 1);
}
